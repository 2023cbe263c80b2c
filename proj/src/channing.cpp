#include "qi/channing.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qi/errors.hpp"
#include "qi/io.hpp"

namespace qi {

namespace detail {
extern const std::string_view kChanningCsv;
}

namespace {

constexpr KernelPair kReversedPairs[] = {{kSign, kSign}, {kLinear, kSign}, {kRank, kSign}};

std::size_t count_group(std::string_view csv, std::string_view label) {
    std::size_t count = 0;
    std::istringstream in{std::string(csv)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(std::string(label) + ",", 0) == 0) ++count;
    }
    return count;
}

IngestResult load_group(std::string_view label) {
    InputSpec spec;
    spec.path = "channing.csv";
    spec.entry_column = "entry_age_months";
    spec.exit_column = "exit_age_months";
    spec.event_column = "event";
    spec.group_column = "sex";
    spec.group_value = std::string(label);
    spec.time_units = "months";
    spec.invalid_rows = InvalidRowPolicy::Skip;
    return ingest_csv_text(channing_csv(), spec);
}

}  // namespace

std::string_view channing_csv() { return detail::kChanningCsv; }

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_string(ChanningGroup group) {
    switch (group) {
        case ChanningGroup::Men: return "men";
        case ChanningGroup::Women: return "women";
        case ChanningGroup::Both: return "both";
    }
    return "?";
}

std::optional<ChanningGroup> parse_channing_group(std::string_view name) {
    std::string v(name);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "men" || v == "male") return ChanningGroup::Men;
    if (v == "women" || v == "female") return ChanningGroup::Women;
    if (v == "both" || v == "all") return ChanningGroup::Both;
    return std::nullopt;
}

ChanningData load_channing() {
    ChanningData out;
    out.checksum = fnv1a64(channing_csv());
    if (out.checksum != kChanningChecksum) {
        throw Error("bundled Channing data checksum mismatch: data differs from the "
                    "reference version");
    }
    out.male_records = count_group(channing_csv(), "Male");
    out.female_records = count_group(channing_csv(), "Female");
    auto men = load_group("Male");
    auto women = load_group("Female");
    for (const auto& w : men.warnings) out.warnings.push_back("Men: " + w);
    for (const auto& w : women.warnings) out.warnings.push_back("Women: " + w);
    out.men = std::move(men.data);
    out.women = std::move(women.data);
    return out;
}

std::vector<ChanningRow> channing_analysis(const ChanningData& data, ChanningGroup group) {
    std::vector<ChanningRow> rows;
    const auto run = [&](const std::string& label, const Dataset& d) {
        for (const auto& r : quasi_independence_tests(d, kStudyKernelPairs, Region::Lambda)) {
            rows.push_back({label, false, r});
        }
        const Dataset reversed = reverse_roles(d);
        for (const auto& r : quasi_independence_tests(reversed, kReversedPairs, Region::Lambda)) {
            rows.push_back({label, true, r});
        }
    };
    if (group != ChanningGroup::Women) run("Men", data.men);
    if (group != ChanningGroup::Men) run("Women", data.women);
    return rows;
}

}  // namespace qi
