#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qi/kernels.hpp"
#include "qi/report.hpp"
#include "qi/simulate.hpp"
#include "qi/teststat.hpp"
#include "support.hpp"

using namespace qi;

namespace {

Dataset transform(const Dataset& d, double (*f)(double)) {
    auto obs = d.observations();
    for (auto& o : obs) {
        o.entry = f(o.entry);
        o.exit = f(o.exit);
    }
    return Dataset(obs);
}

double cube_plus(double x) { return x * x * x + x; }

}  // namespace

TEST(Properties, KernelSkewSymmetry) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<double> v(30);
    for (auto& x : v) x = std::round(3 * z(rng));
    for (KernelSpec k : {kSign, kLinear, kRank}) {
        const BoundKernel bk(k, v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            EXPECT_EQ(bk(i, i), 0.0);
            for (std::size_t j = 0; j < v.size(); ++j) EXPECT_EQ(bk(i, j), -bk(j, i));
        }
    }
    for (int r = 0; r < 1000; ++r) {
        const double s = z(rng), t = z(rng);
        EXPECT_EQ(eval_sign(s, t), -eval_sign(t, s));
        EXPECT_EQ(eval_linear(s, t), -eval_linear(t, s));
    }
}

TEST(Properties, PairProductSymmetric) {
    std::mt19937_64 rng(2);
    const auto d = fixtures::random_tied_dataset(rng, 25);
    for (const auto& p : kStudyKernelPairs) {
        const auto a = PairMatrix::from_dataset(d, p, Region::Lambda);
        const BoundKernel g(p.g, d.entries()), h(p.h, d.exits());
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                EXPECT_EQ(g(i, j) * h(i, j), g(j, i) * h(j, i));
        (void)a;
    }
}

TEST(Properties, PermutationInvariance) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const auto d = fixtures::random_tied_dataset(rng, 30);
        auto obs = d.observations();
        std::shuffle(obs.begin(), obs.end(), rng);
        const Dataset shuffled(obs);
        for (const auto& p : kStudyKernelPairs) {
            for (Region region : {Region::Omega, Region::Lambda}) {
                const double k1 = kappa_hat(d, p.g, p.h, region);
                const double k2 = kappa_hat(shuffled, p.g, p.h, region);
                EXPECT_NEAR(k1, k2, 1e-12 * (1 + std::abs(k1)));
                const double f1 = phi_hat_fast(d, p.g, p.h, region);
                const double f2 = phi_hat_fast(shuffled, p.g, p.h, region);
                EXPECT_NEAR(f1, f2, 1e-12 * (1 + std::abs(f1)));
            }
        }
    }
}

TEST(Properties, MonotoneTransformInvariance) {
    std::mt19937_64 rng(4);
    const auto d = fixtures::random_dataset(rng, 60);
    const auto t = transform(d, cube_plus);
    for (Region region : {Region::Omega, Region::Lambda}) {
        EXPECT_EQ(count_comparable(d, region), count_comparable(t, region));
        for (const auto& p : {KernelPair{kSign, kSign}, KernelPair{kRank, kSign},
                              KernelPair{kRank, kRank}}) {
            const auto a = quasi_independence_test(d, p.g, p.h, region);
            const auto b = quasi_independence_test(t, p.g, p.h, region);
            EXPECT_NEAR(a.chi_square, b.chi_square, 1e-10 * (1 + a.chi_square));
        }
        const auto a = quasi_independence_test(d, kLinear, kLinear, region);
        const auto b = quasi_independence_test(t, kLinear, kLinear, region);
        EXPECT_GT(std::abs(a.chi_square - b.chi_square), 1e-6);
    }
}

TEST(Properties, LambdaReducesToOmegaWithoutCensoring) {
    std::mt19937_64 rng(5);
    const auto d = fixtures::random_dataset(rng, 50, 0.0);
    for (const auto& p : kStudyKernelPairs) {
        const auto a = quasi_independence_test(d, p.g, p.h, Region::Omega);
        const auto b = quasi_independence_test(d, p.g, p.h, Region::Lambda);
        EXPECT_EQ(a.kappa_hat, b.kappa_hat);
        EXPECT_EQ(a.chi_square, b.chi_square);
        EXPECT_EQ(a.p_value, b.p_value);
    }
}

TEST(Properties, Boundedness) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = fixtures::random_tied_dataset(rng, 20 + rep);
        EXPECT_LE(std::abs(kappa_hat(d, kSign, kSign, Region::Omega)), 1.0);
        EXPECT_LT(std::abs(kappa_hat(d, kRank, kRank, Region::Omega)), 1.0);
    }
}

TEST(Properties, PhiFastEqualsBruteforce) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = fixtures::random_dataset(rng, 3 + rep * 2);
        for (const auto& p : kStudyKernelPairs) {
            for (Region region : {Region::Omega, Region::Lambda}) {
                const double fast = phi_hat_fast(d, p.g, p.h, region);
                const double slow = phi_hat_bruteforce(d, p.g, p.h, region);
                if (p.g == kSign && p.h == kSign) {
                    EXPECT_EQ(fast, slow);
                } else {
                    EXPECT_LE(std::abs(fast - slow), 1e-10 * std::abs(slow));
                }
            }
        }
    }
}

TEST(Properties, ChiSquareTailAt95) {
    EXPECT_NEAR(chi_square1_upper_tail(3.841459), 0.05, 1e-3);
}

TEST(Properties, NullMeanZero) {
    for (bool censored : {false, true}) {
        SimScenario s;
        s.family = Family::ExpNull;
        s.target_n = 100;
        s.censoring_target = censored ? 0.4 : 0.0;
        s.seed = 11;
        const auto r = run_experiment(s, kStudyKernelPairs, 300, 0.05);
        for (const auto& k : r.kernels) {
            EXPECT_LT(std::abs(k.kappa_mean), 3.0 * k.kappa_sd / std::sqrt(300.0))
                << kernel_label(k.pair);
        }
    }
}
