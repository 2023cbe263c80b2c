#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qi {

/// One subject: truncation (entry) time L, observed time T = min(X, C),
/// and the failure indicator.
struct Observation {
    double entry = 0.0;
    double exit = 0.0;
    bool event = true;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Non-empty collection of observations with entry < exit for every row.
/// Stored column-wise; the pairwise scans only touch the three arrays.
class Dataset {
public:
    Dataset() = default;
    /// Throws ValidationError (row index = position) when entry >= exit or
    /// a time is not finite, DegenerateDataset when empty.
    explicit Dataset(std::span<const Observation> observations);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::span<const double> entries() const { return entries_; }
    std::span<const double> exits() const { return exits_; }
    std::span<const std::uint8_t> events() const { return events_; }

    Observation operator[](std::size_t i) const {
        return {entries_[i], exits_[i], events_[i] != 0};
    }
    std::vector<Observation> observations() const;
    std::size_t event_count() const;

private:
    std::vector<double> entries_;
    std::vector<double> exits_;
    std::vector<std::uint8_t> events_;
};

/// Which comparable region indexes the U-statistic: Omega ignores the event
/// bits (left truncation only), Lambda also requires the earlier exit to be
/// an observed failure.
enum class Region { Omega, Lambda };

inline Region region_for(bool censored_mode) {
    return censored_mode ? Region::Lambda : Region::Omega;
}

inline bool intervals_overlap(double entry_a, double exit_a, double entry_b, double exit_b) {
    const double lo = entry_a > entry_b ? entry_a : entry_b;
    const double hi = exit_a < exit_b ? exit_a : exit_b;
    return lo < hi;
}

inline bool omega(const Observation& a, const Observation& b) {
    return intervals_overlap(a.entry, a.exit, b.entry, b.exit);
}

inline bool lambda_pair(double entry_a, double exit_a, bool event_a,
                        double entry_b, double exit_b, bool event_b) {
    if (!intervals_overlap(entry_a, exit_a, entry_b, exit_b)) return false;
    if (event_a && event_b) return true;
    if (event_a && exit_a < exit_b) return true;
    return event_b && exit_b < exit_a;
}

inline bool lambda(const Observation& a, const Observation& b) {
    return lambda_pair(a.entry, a.exit, a.event, b.entry, b.exit, b.event);
}

inline bool comparable(const Dataset& data, std::size_t i, std::size_t j, Region region) {
    const auto e = data.entries();
    const auto x = data.exits();
    if (region == Region::Omega) return intervals_overlap(e[i], x[i], e[j], x[j]);
    const auto d = data.events();
    return lambda_pair(e[i], x[i], d[i] != 0, e[j], x[j], d[j] != 0);
}

/// W_n (Omega) or V_n (Lambda): number of comparable unordered pairs.
std::uint64_t count_comparable(const Dataset& data, Region region);

}  // namespace qi
