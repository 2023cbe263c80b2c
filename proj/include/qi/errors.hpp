#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row or unparsable field.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A row that parses but violates an Observation invariant (entry < exit).
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Too few observations, or no comparable pairs.
class DegenerateDataset : public Error {
public:
    using Error::Error;
};

/// Plug-in variance or comparable-pair probability is zero.
class DegenerateVariance : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    using Error::Error;
};

class GenerationStall : public Error {
public:
    using Error::Error;
};

class CalibrationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace qi
