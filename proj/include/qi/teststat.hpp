#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qi/comparability.hpp"
#include "qi/kernels.hpp"
#include "qi/pair_sums.hpp"

namespace qi {

/// Outcome of one quasi-independence test.
struct TestResult {
    double kappa_hat = 0.0;         // U-statistic normalized by the comparable-pair count
    double u_numerator = 0.0;       // sum_{i<j} a_ij
    std::size_t n = 0;
    std::uint64_t n_comparable = 0; // W_n (Omega) or V_n (Lambda)
    double pr_hat = 0.0;            // n_comparable / C(n,2)
    double phi_hat = 0.0;           // ordered-triple average of a_ij a_ik
    double chi_square = 0.0;
    double p_value = 1.0;
    KernelSpec g_kernel;
    KernelSpec h_kernel;
    bool censored_mode = false;
    /// The null distribution additionally needs L and C quasi-independent.
    bool assumption_3b_required = false;
};

/// True for censored data whenever h is not the sign kernel.
inline bool requires_censoring_quasi_independence(KernelSpec h, Region region) {
    return region == Region::Lambda && h.kind != KernelKind::Sign;
}

double u_numerator(const Dataset& data, KernelSpec g, KernelSpec h, Region region);

/// Throws DegenerateDataset when fewer than two observations or no pair is
/// comparable.
double kappa_hat(const Dataset& data, KernelSpec g, KernelSpec h, Region region);

/// O(n^2) plug-in variance via row sums:
///   sum_i (a_i.^2 - c_i.) / (n (n-1) (n-2)).
/// Throws DegenerateDataset when n < 3.
double phi_hat_fast(const Dataset& data, KernelSpec g, KernelSpec h, Region region);

/// O(n^3) average of a_ij a_ik over ordered triples with i not in {j, k},
/// j != k. Testing oracle for phi_hat_fast.
double phi_hat_bruteforce(const Dataset& data, KernelSpec g, KernelSpec h, Region region);

/// Dense symmetric pair matrix with zero diagonal, row-major n x n.
class PairMatrix {
public:
    explicit PairMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    static PairMatrix from_dataset(const Dataset& data, KernelPair pair, Region region);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }

private:
    std::size_t n_;
    std::vector<double> a_;
};

double phi_hat_fast(const PairMatrix& a);
double phi_hat_bruteforce(const PairMatrix& a);

struct ChiSquareTest {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Upper tail of the chi-square distribution with one degree of freedom,
/// erfc(sqrt(x / 2)).
double chi_square1_upper_tail(double x);

/// statistic = n kappa^2 pr^2 / (4 phi). Throws DegenerateVariance when
/// phi <= 0 or pr == 0.
ChiSquareTest chi_square_test(double kappa, double phi, double pr, std::size_t n);

/// Full test for one kernel pair. Requires n >= 3 and a comparable pair.
TestResult quasi_independence_test(const Dataset& data, KernelSpec g, KernelSpec h, Region region);

/// Several kernel pairs on the same data with a single pairwise pass.
std::vector<TestResult> quasi_independence_tests(const Dataset& data,
                                                 std::span<const KernelPair> pairs, Region region);

/// Swap the roles of failure and censoring: event -> 1 - event.
Dataset reverse_roles(const Dataset& data);

}  // namespace qi
