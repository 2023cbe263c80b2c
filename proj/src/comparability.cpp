#include "qi/comparability.hpp"

#include <cmath>
#include <string>

#include "qi/errors.hpp"

namespace qi {

Dataset::Dataset(std::span<const Observation> observations) {
    if (observations.empty()) throw DegenerateDataset("dataset has no observations");
    entries_.reserve(observations.size());
    exits_.reserve(observations.size());
    events_.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        if (!std::isfinite(o.entry) || !std::isfinite(o.exit)) {
            throw ValidationError("observation " + std::to_string(i) + ": non-finite time", i);
        }
        if (!(o.entry < o.exit)) {
            throw ValidationError("observation " + std::to_string(i) +
                                      ": entry time must be strictly less than exit time",
                                  i);
        }
        entries_.push_back(o.entry);
        exits_.push_back(o.exit);
        events_.push_back(o.event ? 1 : 0);
    }
}

std::vector<Observation> Dataset::observations() const {
    std::vector<Observation> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
    return out;
}

std::size_t Dataset::event_count() const {
    std::size_t count = 0;
    for (auto d : events_) count += d;
    return count;
}

std::uint64_t count_comparable(const Dataset& data, Region region) {
    const std::size_t n = data.size();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) count += comparable(data, i, j, region);
    }
    return count;
}

}  // namespace qi
