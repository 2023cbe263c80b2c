#include "bound_pairs.hpp"
#include "qi/pair_sums.hpp"

namespace qi {

PairSums pair_sums_serial(const Dataset& data, std::span<const KernelPair> pairs, Region region) {
    const std::size_t n = data.size();
    const std::size_t m = pairs.size();
    const detail::BoundPairs bound(data, pairs);

    std::vector<double> row(n * m, 0.0);
    std::vector<double> sq(n * m, 0.0);
    PairSums out;
    out.per_pair.assign(m, {});

    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!comparable(data, i, j, region)) continue;
            ++out.n_comparable;
            for (std::size_t k = 0; k < m; ++k) {
                const double a = bound.product(k, i, j);
                out.per_pair[k].u_numerator += a;
                row[i * m + k] += a;
                row[j * m + k] += a;
                sq[i * m + k] += a * a;
                sq[j * m + k] += a * a;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double r = row[i * m + k];
            out.per_pair[k].hub_sum += r * r - sq[i * m + k];
        }
    }
    return out;
}

}  // namespace qi
