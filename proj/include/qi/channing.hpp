#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qi/comparability.hpp"
#include "qi/teststat.hpp"

namespace qi {

/// Channing House retirement-centre data, ages in months, bundled with the
/// library (columns sex, entry_age_months, exit_age_months, event).
std::string_view channing_csv();

/// FNV-1a 64-bit hash of the bundled CSV bytes.
inline constexpr std::uint64_t kChanningChecksum = 0x620d38d1c30af561ULL;

std::uint64_t fnv1a64(std::string_view bytes);

enum class ChanningGroup { Men, Women, Both };

std::string to_string(ChanningGroup group);
std::optional<ChanningGroup> parse_channing_group(std::string_view name);

struct ChanningData {
    std::size_t male_records = 0;    // rows in the file, before validation
    std::size_t female_records = 0;
    Dataset men;                     // rows with entry < exit
    Dataset women;
    std::uint64_t checksum = 0;
    std::vector<std::string> warnings;
};

/// Parses the bundled data, dropping rows with entry >= exit (with a
/// warning each). Throws Error when the checksum does not match.
ChanningData load_channing();

struct ChanningRow {
    std::string group;   // "Men" or "Women"
    bool reversed = false;
    TestResult result;
};

/// For each selected group: the five kernel pairs on the censored data, then
/// Sign/Sign, Linear/Sign and Rank/Sign with failure and censoring reversed.
std::vector<ChanningRow> channing_analysis(const ChanningData& data, ChanningGroup group);

}  // namespace qi
