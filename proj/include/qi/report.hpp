#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qi/are.hpp"
#include "qi/channing.hpp"
#include "qi/simulate.hpp"
#include "qi/teststat.hpp"

namespace qi {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class OutputFormat { Table, Json, Csv };
std::optional<OutputFormat> parse_format(std::string_view name);

using Json = nlohmann::ordered_json;

Json to_json(const TestResult& r);
/// Inverse of to_json; throws ParseError on missing or mistyped fields.
TestResult test_result_from_json(const Json& j);

Json to_json(const ExperimentReport& r);
Json to_json(const std::vector<AreCell>& cells, RiskForm form);
Json to_json(const ChanningData& data, const std::vector<ChanningRow>& rows);

struct ReportEnvelope {
    std::string command;              // subcommand name
    std::vector<std::string> argv;    // full command line
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings;
    Json payload;
};

/// {"tool", "version", "command", "argv", "seed", "warnings", "result"}
Json to_json(const ReportEnvelope& envelope);

/// Serialized JSON text; doubles keep 17 significant digits.
std::string dump(const Json& j);

/// Rectangular report; numeric cells are formatted per output format
/// (4 decimals for tables, 15 significant digits for CSV).
struct TextTable {
    using Cell = std::variant<std::string, double, std::int64_t>;
    std::vector<std::string> headers;
    std::vector<std::vector<Cell>> rows;
};

std::string render(const TextTable& table, OutputFormat format);

TextTable test_table(const std::vector<TestResult>& results);
TextTable channing_table(const std::vector<ChanningRow>& rows);
/// Kernel pairs as rows, one rejection-rate column per report, and a final
/// row with the mean censored fraction.
TextTable experiment_table(const std::vector<ExperimentReport>& reports);
/// Rows (model, g) and the six (entry law, psi0, psi1) columns.
TextTable are_text_table(const std::vector<AreCell>& cells);

std::string kernel_label(const KernelPair& pair);

}  // namespace qi
