#include "qi/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qi/errors.hpp"

namespace qi {

namespace {

std::string format_double(double v, OutputFormat format) {
    char buf[64];
    if (format == OutputFormat::Csv) {
        std::snprintf(buf, sizeof buf, "%.15g", v);
    } else if (v != 0.0 && std::abs(v) < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.3e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f", v);
    }
    return buf;
}

std::string cell_text(const TextTable::Cell& c, OutputFormat format) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d, format);
    return std::to_string(std::get<std::int64_t>(c));
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

Json kernel_json(const KernelPair& p) {
    return Json{{"g", std::string(to_string(p.g.kind))}, {"h", std::string(to_string(p.h.kind))}};
}

KernelSpec kernel_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ParseError(std::string("TestResult JSON: missing kernel '") + key + "'", 0);
    }
    const auto k = parse_kernel(j[key].get<std::string>());
    if (!k) throw ParseError(std::string("TestResult JSON: unknown kernel in '") + key + "'", 0);
    return *k;
}

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("TestResult JSON: missing field '") + key + "'", 0);
    }
    try {
        return j[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("TestResult JSON: mistyped field '") + key + "'", 0);
    }
}

std::string psi_label(double psi0, double psi1) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%g,%g)", psi0, psi1);
    return buf;
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view name) {
    std::string v(name);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "table") return OutputFormat::Table;
    if (v == "json") return OutputFormat::Json;
    if (v == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

std::string kernel_label(const KernelPair& pair) {
    return std::string(to_string(pair.g.kind)) + "/" + std::string(to_string(pair.h.kind));
}

Json to_json(const TestResult& r) {
    Json j;
    j["g"] = std::string(to_string(r.g_kernel.kind));
    j["h"] = std::string(to_string(r.h_kernel.kind));
    j["censored_mode"] = r.censored_mode;
    j["n"] = r.n;
    j["n_comparable"] = r.n_comparable;
    j["u_numerator"] = r.u_numerator;
    j["kappa_hat"] = r.kappa_hat;
    j["pr_hat"] = r.pr_hat;
    j["phi_hat"] = r.phi_hat;
    j["chi_square"] = r.chi_square;
    j["p_value"] = r.p_value;
    j["assumption_3b_required"] = r.assumption_3b_required;
    return j;
}

TestResult test_result_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("TestResult JSON: expected an object", 0);
    TestResult r;
    r.g_kernel = kernel_field(j, "g");
    r.h_kernel = kernel_field(j, "h");
    r.censored_mode = field<bool>(j, "censored_mode");
    r.n = field<std::size_t>(j, "n");
    r.n_comparable = field<std::uint64_t>(j, "n_comparable");
    r.u_numerator = field<double>(j, "u_numerator");
    r.kappa_hat = field<double>(j, "kappa_hat");
    r.pr_hat = field<double>(j, "pr_hat");
    r.phi_hat = field<double>(j, "phi_hat");
    r.chi_square = field<double>(j, "chi_square");
    r.p_value = field<double>(j, "p_value");
    r.assumption_3b_required = field<bool>(j, "assumption_3b_required");
    return r;
}

Json to_json(const ExperimentReport& r) {
    Json j;
    j["scenario"] = {{"family", to_string(r.scenario.family)},
                     {"target_n", r.scenario.target_n},
                     {"censoring_target", r.scenario.censoring_target},
                     {"censoring_rate", r.scenario.censoring_rate},
                     {"seed", r.scenario.seed}};
    j["censored_mode"] = r.scenario.censored();
    j["level"] = r.level;
    j["replicates"] = r.replicates;
    j["degenerate"] = r.degenerate;
    j["mean_censoring_fraction"] = r.mean_censoring_fraction;
    Json kernels = Json::array();
    for (const auto& k : r.kernels) {
        Json e = kernel_json(k.pair);
        e["rejections"] = k.rejections;
        e["rejection_rate"] = k.rejection_rate;
        e["monte_carlo_se"] = k.monte_carlo_se;
        e["kappa_mean"] = k.kappa_mean;
        e["kappa_sd"] = k.kappa_sd;
        e["assumption_3b_required"] = k.assumption_3b_required;
        kernels.push_back(e);
    }
    j["kernels"] = kernels;
    j["notes"] = r.notes;
    return j;
}

Json to_json(const std::vector<AreCell>& cells, RiskForm form) {
    Json j;
    j["form"] = form == RiskForm::Excess ? "excess" : "relative";
    j["reference_test"] = "sign/sign";
    Json arr = Json::array();
    for (const auto& c : cells) {
        arr.push_back({{"model", c.model},
                       {"entry", c.entry},
                       {"psi0", c.psi0},
                       {"psi1", c.psi1},
                       {"test", to_string(c.test)},
                       {"are", c.are},
                       {"leading_order", c.leading_order}});
    }
    j["cells"] = arr;
    return j;
}

Json to_json(const ChanningData& data, const std::vector<ChanningRow>& rows) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(data.checksum));
    Json j;
    j["checksum_fnv1a64"] = hex;
    j["male_records"] = data.male_records;
    j["female_records"] = data.female_records;
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back({{"group", r.group}, {"reversed", r.reversed}, {"result", to_json(r.result)}});
    }
    j["rows"] = arr;
    return j;
}

Json to_json(const ReportEnvelope& e) {
    Json j;
    j["tool"] = "qitest";
    j["version"] = std::string(kToolVersion);
    j["command"] = e.command;
    j["argv"] = e.argv;
    j["seed"] = e.seed ? Json(*e.seed) : Json(nullptr);
    j["warnings"] = e.warnings;
    j["result"] = e.payload;
    return j;
}

std::string dump(const Json& j) { return j.dump(2); }

std::string render(const TextTable& table, OutputFormat format) {
    std::vector<std::vector<std::string>> text;
    text.push_back(table.headers);
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        for (const auto& c : row) line.push_back(cell_text(c, format));
        text.push_back(line);
    }
    std::ostringstream out;
    if (format == OutputFormat::Csv) {
        for (const auto& line : text) {
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (k) out << ',';
                out << csv_escape(line[k]);
            }
            out << '\n';
        }
        return out.str();
    }
    std::vector<std::size_t> width(table.headers.size(), 0);
    for (const auto& line : text) {
        for (std::size_t k = 0; k < line.size() && k < width.size(); ++k) {
            width[k] = std::max(width[k], line[k].size());
        }
    }
    for (std::size_t r = 0; r < text.size(); ++r) {
        for (std::size_t k = 0; k < text[r].size(); ++k) {
            if (k) out << "  ";
            const auto& s = text[r][k];
            const std::size_t pad = k < width.size() ? width[k] - std::min(width[k], s.size()) : 0;
            if (k == 0) {
                out << s << std::string(pad, ' ');
            } else {
                out << std::string(pad, ' ') << s;
            }
        }
        out << '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w;
            out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
        }
    }
    return out.str();
}

TextTable test_table(const std::vector<TestResult>& results) {
    TextTable t;
    t.headers = {"g", "h", "mode", "n", "comparable", "kappa", "phi", "chi2", "p", "3B"};
    for (const auto& r : results) {
        t.rows.push_back({std::string(to_string(r.g_kernel.kind)),
                          std::string(to_string(r.h_kernel.kind)),
                          std::string(r.censored_mode ? "censored" : "truncated"),
                          static_cast<std::int64_t>(r.n), static_cast<std::int64_t>(r.n_comparable),
                          r.kappa_hat, r.phi_hat, r.chi_square, r.p_value,
                          std::string(r.assumption_3b_required ? "*" : "")});
    }
    return t;
}

TextTable channing_table(const std::vector<ChanningRow>& rows) {
    TextTable t;
    t.headers = {"group", "roles", "g", "h", "n", "kappa", "chi2", "p"};
    for (const auto& row : rows) {
        const auto& r = row.result;
        t.rows.push_back({row.group, std::string(row.reversed ? "reversed" : "direct"),
                          std::string(to_string(r.g_kernel.kind)),
                          std::string(to_string(r.h_kernel.kind)) +
                              (r.assumption_3b_required ? "*" : ""),
                          static_cast<std::int64_t>(r.n), r.kappa_hat, r.chi_square, r.p_value});
    }
    return t;
}

TextTable experiment_table(const std::vector<ExperimentReport>& reports) {
    TextTable t;
    t.headers = {"g", "h"};
    for (const auto& r : reports) {
        t.headers.push_back(to_string(r.scenario.family) + (r.scenario.censored() ? " (cens)" : ""));
    }
    if (reports.empty()) return t;
    const auto& first = reports.front().kernels;
    for (std::size_t k = 0; k < first.size(); ++k) {
        std::vector<TextTable::Cell> row{
            std::string(to_string(first[k].pair.g.kind)),
            std::string(to_string(first[k].pair.h.kind)) +
                (first[k].assumption_3b_required ? "*" : "")};
        for (const auto& r : reports) row.push_back(r.kernels.at(k).rejection_rate);
        t.rows.push_back(row);
    }
    std::vector<TextTable::Cell> se{std::string("(max MC SE)"), std::string("")};
    std::vector<TextTable::Cell> cens{std::string("(censored fraction)"), std::string("")};
    for (const auto& r : reports) {
        double m = 0.0;
        for (const auto& k : r.kernels) m = std::max(m, k.monte_carlo_se);
        se.push_back(m);
        cens.push_back(r.mean_censoring_fraction);
    }
    t.rows.push_back(se);
    t.rows.push_back(cens);
    return t;
}

TextTable are_text_table(const std::vector<AreCell>& cells) {
    TextTable t;
    t.headers = {"model", "g", "h"};
    std::vector<std::string> columns;
    for (const auto& c : cells) {
        const auto col = c.entry + " " + psi_label(c.psi0, c.psi1);
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    }
    t.headers.insert(t.headers.end(), columns.begin(), columns.end());
    for (std::size_t start = 0; start < cells.size(); start += columns.size()) {
        const auto& c0 = cells[start];
        const std::string g = c0.test == AreTest::RankSign ? "rank" : "linear";
        std::vector<TextTable::Cell> row{c0.model + (c0.leading_order ? "+" : ""), g,
                                         std::string("sign")};
        for (std::size_t k = 0; k < columns.size() && start + k < cells.size(); ++k) {
            row.push_back(cells[start + k].are);
        }
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace qi
