#pragma once

#include <random>
#include <vector>

#include "qi/comparability.hpp"

namespace qi::fixtures {

/// Random left-truncated dataset with continuous times (no ties).
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, double censor_prob = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = 2.0 * u(rng);
        obs.push_back({l, l + 0.05 + e(rng), u(rng) >= censor_prob});
    }
    return Dataset(obs);
}

/// Random dataset on a coarse integer grid so that ties are frequent.
inline Dataset random_tied_dataset(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> entry(0, 5), gap(1, 4), ev(0, 2);
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = entry(rng);
        obs.push_back({l, l + gap(rng), ev(rng) != 0});
    }
    return Dataset(obs);
}

inline Dataset example3() { return Dataset(std::vector<Observation>{{0, 3, true}, {1, 2, true}, {2, 4, true}}); }
inline Dataset example3_censored() {
    return Dataset(std::vector<Observation>{{0, 3, true}, {1, 2, false}, {1.5, 4, true}});
}

}  // namespace qi::fixtures
