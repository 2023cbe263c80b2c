#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qi/errors.hpp"
#include "qi/io.hpp"

namespace qi {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Split one record, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_fields(std::string_view line, char delim, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError("row " + std::to_string(row) + ": unterminated quote", row);
    fields.emplace_back(trim(cur));
    return fields;
}

double parse_time(const std::string& field, const std::string& column, std::size_t row) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError("row " + std::to_string(row) + ": column '" + column +
                             "' is not a finite number: '" + field + "'",
                         row);
    }
    return v;
}

bool parse_event(const std::string& field, const std::string& column, std::size_t row) {
    const std::string v = lower(field);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ParseError("row " + std::to_string(row) + ": column '" + column +
                         "' must be 0/1, got '" + field + "'",
                     row);
}

std::size_t distinct(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

}  // namespace

TieCounts count_ties(const Dataset& data) {
    return {data.size() - distinct(data.entries()), data.size() - distinct(data.exits())};
}

IngestResult ingest_csv(const InputSpec& spec) {
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + spec.path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_csv_text(buf.str(), spec);
}

IngestResult ingest_csv_text(std::string_view text, const InputSpec& spec) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    std::size_t first_data = 0;
    std::vector<std::string> names;
    if (spec.header) {
        while (first_data < lines.size() && trim(lines[first_data]).empty()) ++first_data;
        if (first_data == lines.size()) throw ParseError("'" + spec.path + "': empty file", 0);
        names = split_fields(lines[first_data], spec.delimiter, first_data + 1);
        ++first_data;
    }

    const auto locate = [&](const std::string& column) -> std::optional<std::size_t> {
        if (spec.header) {
            const auto it = std::find_if(names.begin(), names.end(), [&](const std::string& n) {
                return lower(n) == lower(column);
            });
            if (it == names.end()) return std::nullopt;
            return static_cast<std::size_t>(it - names.begin());
        }
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), idx);
        if (ec != std::errc() || ptr != column.data() + column.size() || idx == 0) {
            return std::nullopt;
        }
        return idx - 1;
    };
    const auto require = [&](const std::string& column) {
        const auto idx = locate(column);
        if (!idx) throw ParseError("'" + spec.path + "': no column '" + column + "'", 1);
        return *idx;
    };

    const std::size_t entry_idx = require(spec.entry_column);
    const std::size_t exit_idx = require(spec.exit_column);
    std::optional<std::size_t> event_idx;
    if (spec.event_column) {
        event_idx = require(*spec.event_column);
    } else if (spec.header) {
        event_idx = locate("event");
    }
    std::optional<std::size_t> group_idx;
    if (spec.group_column) group_idx = require(*spec.group_column);
    const std::string event_name = spec.event_column.value_or("event");

    IngestResult result;
    result.has_event_column = event_idx.has_value();
    std::vector<Observation> obs;
    for (std::size_t k = first_data; k < lines.size(); ++k) {
        const std::size_t row = k + 1;
        if (trim(lines[k]).empty()) continue;
        const auto fields = split_fields(lines[k], spec.delimiter, row);
        const auto field = [&](std::size_t idx, const std::string& column) -> const std::string& {
            if (idx >= fields.size()) {
                throw ParseError("row " + std::to_string(row) + ": missing column '" + column + "'",
                                 row);
            }
            return fields[idx];
        };
        if (group_idx && spec.group_value &&
            lower(field(*group_idx, *spec.group_column)) != lower(*spec.group_value)) {
            continue;
        }
        Observation o;
        o.entry = parse_time(field(entry_idx, spec.entry_column), spec.entry_column, row);
        o.exit = parse_time(field(exit_idx, spec.exit_column), spec.exit_column, row);
        o.event = event_idx ? parse_event(field(*event_idx, event_name), event_name, row) : true;
        if (!(o.entry < o.exit)) {
            const std::string msg = "row " + std::to_string(row) + ": entry " +
                                    fields[entry_idx] + " is not less than exit " +
                                    fields[exit_idx];
            if (spec.invalid_rows == InvalidRowPolicy::Reject) throw ValidationError(msg, row);
            result.warnings.push_back(msg + "; row skipped");
            ++result.skipped_rows;
            continue;
        }
        obs.push_back(o);
    }
    if (obs.empty()) throw DegenerateDataset("'" + spec.path + "': no usable rows");

    result.data = Dataset(obs);
    result.ties = count_ties(result.data);
    if (result.ties.entry > 0 || result.ties.exit > 0) {
        result.warnings.push_back(std::to_string(result.ties.entry) + " tied entry time(s) and " +
                                  std::to_string(result.ties.exit) +
                                  " tied exit time(s); tied pairs contribute 0 to sign kernels "
                                  "and ranks use midranks");
    }
    return result;
}

}  // namespace qi
