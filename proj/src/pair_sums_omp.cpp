#include <omp.h>

#include "bound_pairs.hpp"
#include "qi/pair_sums.hpp"
#include "qi/summation.hpp"

namespace qi {

namespace {

// Row i of the pair matrix: a_i. and c_i. for every kernel pair, plus the
// number of comparable partners. Each row is owned by one thread.
struct RowScan {
    const Dataset& data;
    const detail::BoundPairs& bound;
    Region region;

    std::uint32_t operator()(std::size_t i, double* row_out, double* sq_out) const {
        const std::size_t n = data.size();
        const std::size_t m = bound.size();
        std::vector<CompensatedSum> row(m), sq(m);
        std::uint32_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !comparable(data, i, j, region)) continue;
            ++count;
            for (std::size_t k = 0; k < m; ++k) {
                const double a = bound.product(k, i, j);
                row[k] += a;
                sq[k] += a * a;
            }
        }
        for (std::size_t k = 0; k < m; ++k) {
            row_out[k] = row[k].value();
            sq_out[k] = sq[k].value();
        }
        return count;
    }
};

}  // namespace

PairSums pair_sums_parallel(const Dataset& data, std::span<const KernelPair> pairs,
                            Region region) {
    const std::size_t n = data.size();
    const std::size_t m = pairs.size();
    const detail::BoundPairs bound(data, pairs);
    const RowScan scan{data, bound, region};

    std::vector<double> row(n * m);
    std::vector<double> sq(n * m);
    std::vector<std::uint32_t> count(n);

    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (n >= 64 && !omp_in_parallel())
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto r = static_cast<std::size_t>(i);
        count[r] = scan(r, &row[r * m], &sq[r * m]);
    }

    PairSums out;
    out.per_pair.assign(m, {});
    std::uint64_t ordered = 0;
    for (std::size_t i = 0; i < n; ++i) ordered += count[i];
    out.n_comparable = ordered / 2;

    for (std::size_t k = 0; k < m; ++k) {
        CompensatedSum u, hub;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = row[i * m + k];
            u += r;
            hub += r * r - sq[i * m + k];
        }
        out.per_pair[k].u_numerator = 0.5 * u.value();
        out.per_pair[k].hub_sum = hub.value();
    }
    return out;
}

RowSums row_sums(const Dataset& data, KernelPair pair, Region region) {
    const std::size_t n = data.size();
    const KernelPair pairs[] = {pair};
    const detail::BoundPairs bound(data, pairs);
    const RowScan scan{data, bound, region};

    RowSums out;
    out.a.resize(n);
    out.c.resize(n);
    out.comparable.resize(n);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (n >= 64 && !omp_in_parallel())
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto r = static_cast<std::size_t>(i);
        out.comparable[r] = scan(r, &out.a[r], &out.c[r]);
    }
    return out;
}

}  // namespace qi
