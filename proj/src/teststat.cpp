#include "qi/teststat.hpp"

#include <cmath>

#include "qi/errors.hpp"
#include "qi/summation.hpp"

namespace qi {

namespace {

double pair_count(std::size_t n) {
    const auto m = static_cast<double>(n);
    return 0.5 * m * (m - 1.0);
}

double ordered_triple_count(std::size_t n) {
    const auto m = static_cast<double>(n);
    return m * (m - 1.0) * (m - 2.0);
}

void require_size(const Dataset& data, std::size_t minimum, const char* what) {
    if (data.size() < minimum) {
        throw DegenerateDataset(std::string(what) + ": need at least " +
                                std::to_string(minimum) + " observations, got " +
                                std::to_string(data.size()));
    }
}

TestResult assemble(const Dataset& data, KernelPair pair, Region region,
                    std::uint64_t n_comparable, const KernelPairSums& sums) {
    const std::size_t n = data.size();
    TestResult r;
    r.n = n;
    r.g_kernel = pair.g;
    r.h_kernel = pair.h;
    r.censored_mode = region == Region::Lambda;
    r.assumption_3b_required = requires_censoring_quasi_independence(pair.h, region);
    r.n_comparable = n_comparable;
    r.u_numerator = sums.u_numerator;
    r.kappa_hat = sums.u_numerator / static_cast<double>(n_comparable);
    r.pr_hat = static_cast<double>(n_comparable) / pair_count(n);
    r.phi_hat = sums.hub_sum / ordered_triple_count(n);
    const auto chi = chi_square_test(r.kappa_hat, r.phi_hat, r.pr_hat, n);
    r.chi_square = chi.statistic;
    r.p_value = chi.p_value;
    return r;
}

}  // namespace

double u_numerator(const Dataset& data, KernelSpec g, KernelSpec h, Region region) {
    require_size(data, 2, "u_numerator");
    const KernelPair pairs[] = {{g, h}};
    return pair_sums_parallel(data, pairs, region).per_pair[0].u_numerator;
}

double kappa_hat(const Dataset& data, KernelSpec g, KernelSpec h, Region region) {
    require_size(data, 2, "kappa_hat");
    const KernelPair pairs[] = {{g, h}};
    const auto sums = pair_sums_parallel(data, pairs, region);
    if (sums.n_comparable == 0) throw DegenerateDataset("kappa_hat: no comparable pairs");
    return sums.per_pair[0].u_numerator / static_cast<double>(sums.n_comparable);
}

double phi_hat_fast(const Dataset& data, KernelSpec g, KernelSpec h, Region region) {
    require_size(data, 3, "phi_hat_fast");
    const auto rows = row_sums(data, {g, h}, region);
    CompensatedSum total;
    for (std::size_t i = 0; i < data.size(); ++i) total += rows.a[i] * rows.a[i] - rows.c[i];
    return total.value() / ordered_triple_count(data.size());
}

double phi_hat_bruteforce(const Dataset& data, KernelSpec g, KernelSpec h, Region region) {
    require_size(data, 3, "phi_hat_bruteforce");
    return phi_hat_bruteforce(PairMatrix::from_dataset(data, {g, h}, region));
}

PairMatrix PairMatrix::from_dataset(const Dataset& data, KernelPair pair, Region region) {
    const std::size_t n = data.size();
    const BoundKernel g(pair.g, data.entries());
    const BoundKernel h(pair.h, data.exits());
    PairMatrix a(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (comparable(data, i, j, region)) a.set(i, j, g(i, j) * h(i, j));
        }
    }
    return a;
}

double phi_hat_fast(const PairMatrix& a) {
    const std::size_t n = a.size();
    if (n < 3) throw DegenerateDataset("phi_hat_fast: need at least 3 observations");
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum row, sq;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            row += a(i, j);
            sq += a(i, j) * a(i, j);
        }
        total += row.value() * row.value() - sq.value();
    }
    return total.value() / ordered_triple_count(n);
}

double phi_hat_bruteforce(const PairMatrix& a) {
    const std::size_t n = a.size();
    if (n < 3) throw DegenerateDataset("phi_hat_bruteforce: need at least 3 observations");
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                total += a(i, j) * a(i, k);
            }
        }
    }
    return total.value() / ordered_triple_count(n);
}

double chi_square1_upper_tail(double x) {
    if (!(x > 0.0)) return 1.0;
    return std::erfc(std::sqrt(0.5 * x));
}

ChiSquareTest chi_square_test(double kappa, double phi, double pr, std::size_t n) {
    if (!(phi > 0.0)) throw DegenerateVariance("chi_square_test: plug-in variance is not positive");
    if (!(pr > 0.0)) throw DegenerateVariance("chi_square_test: no comparable pairs");
    ChiSquareTest t;
    t.statistic = static_cast<double>(n) * kappa * kappa * pr * pr / (4.0 * phi);
    t.p_value = chi_square1_upper_tail(t.statistic);
    return t;
}

TestResult quasi_independence_test(const Dataset& data, KernelSpec g, KernelSpec h, Region region) {
    const KernelPair pairs[] = {{g, h}};
    return quasi_independence_tests(data, pairs, region).front();
}

std::vector<TestResult> quasi_independence_tests(const Dataset& data,
                                                 std::span<const KernelPair> pairs, Region region) {
    require_size(data, 3, "quasi_independence_test");
    const auto sums = pair_sums_parallel(data, pairs, region);
    if (sums.n_comparable == 0) {
        throw DegenerateDataset("quasi_independence_test: no comparable pairs");
    }
    std::vector<TestResult> out;
    out.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        out.push_back(assemble(data, pairs[k], region, sums.n_comparable, sums.per_pair[k]));
    }
    return out;
}

Dataset reverse_roles(const Dataset& data) {
    auto obs = data.observations();
    for (auto& o : obs) o.event = !o.event;
    return Dataset(obs);
}

}  // namespace qi
