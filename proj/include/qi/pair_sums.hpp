#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qi/comparability.hpp"
#include "qi/kernels.hpp"

namespace qi {

/// g applied to entry times, h applied to exit times.
struct KernelPair {
    KernelSpec g;
    KernelSpec h;

    friend bool operator==(const KernelPair&, const KernelPair&) = default;
};

/// The five kernel combinations studied for each data mode, in table order.
inline constexpr KernelPair kStudyKernelPairs[] = {
    {kSign, kSign}, {kLinear, kSign}, {kLinear, kLinear}, {kRank, kSign}, {kRank, kRank}};

/// Sufficient statistics of one kernel pair over a dataset, with
/// a_ij = g(L_i, L_j) h(T_i, T_j) I(region_ij):
///   u_numerator = sum_{i<j} a_ij
///   hub_sum     = sum_i (a_i.^2 - c_i.) = sum over ordered triples with
///                 distinct hub i of a_ij a_ik
struct KernelPairSums {
    double u_numerator = 0.0;
    double hub_sum = 0.0;
};

struct PairSums {
    std::uint64_t n_comparable = 0;
    std::vector<KernelPairSums> per_pair;  // same order as the requested pairs
};

/// Reference implementation: one pass over unordered pairs i < j with plain
/// accumulation. Kept for testing and benchmarking the parallel kernel.
PairSums pair_sums_serial(const Dataset& data, std::span<const KernelPair> pairs, Region region);

/// OpenMP row-parallel implementation. Each row is reduced by one thread in
/// fixed j order with compensated summation and rows are combined in index
/// order, so the result is bit-identical for any thread count.
PairSums pair_sums_parallel(const Dataset& data, std::span<const KernelPair> pairs,
                            Region region);

/// Row sums a_i. and c_i. = sum_j a_ij^2 for one kernel pair (parallel).
struct RowSums {
    std::vector<double> a;
    std::vector<double> c;
    std::vector<std::uint32_t> comparable;
};
RowSums row_sums(const Dataset& data, KernelPair pair, Region region);

}  // namespace qi
