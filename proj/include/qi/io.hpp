#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qi/comparability.hpp"

namespace qi {

enum class InvalidRowPolicy { Reject, Skip };

/// Where and how to read a dataset. Columns are matched by header name, or
/// by 1-based position ("1", "2", ...) when the file has no header.
struct InputSpec {
    std::string path;
    std::string entry_column = "entry";
    std::string exit_column = "exit";
    /// When unset, a column named "event" is used if present; without an
    /// event column every row is an observed failure.
    std::optional<std::string> event_column;
    std::optional<std::string> group_column;
    std::optional<std::string> group_value;
    char delimiter = ',';
    bool header = true;
    std::string time_units;
    InvalidRowPolicy invalid_rows = InvalidRowPolicy::Reject;
};

struct TieCounts {
    std::size_t entry = 0;  // n - number of distinct entry times
    std::size_t exit = 0;
};

struct IngestResult {
    Dataset data;
    bool has_event_column = false;
    std::size_t skipped_rows = 0;
    TieCounts ties;
    std::vector<std::string> warnings;
};

/// Parse and validate a CSV file. Row numbers in errors and warnings are
/// 1-based file line numbers. Throws ParseError on malformed rows or missing
/// columns, ValidationError when entry >= exit under the Reject policy, and
/// DegenerateDataset when no row remains.
IngestResult ingest_csv(const InputSpec& spec);

/// Same as ingest_csv on in-memory text; spec.path is used only in messages.
IngestResult ingest_csv_text(std::string_view text, const InputSpec& spec);

TieCounts count_ties(const Dataset& data);

}  // namespace qi
