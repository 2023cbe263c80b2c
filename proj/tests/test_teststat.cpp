#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>

#include "qi/errors.hpp"
#include "qi/pair_sums.hpp"
#include "qi/teststat.hpp"
#include "support.hpp"

using namespace qi;

TEST(TestStat, UNumeratorExamples) {
    const auto d = fixtures::example3();
    EXPECT_DOUBLE_EQ(u_numerator(d, kSign, kSign, Region::Omega), 0.0);
    EXPECT_DOUBLE_EQ(u_numerator(d, kLinear, kLinear, Region::Omega), 1.0);
    EXPECT_DOUBLE_EQ(u_numerator(fixtures::example3_censored(), kSign, kSign, Region::Lambda), 1.0);
}

TEST(TestStat, KappaExamples) {
    const auto d = fixtures::example3();
    EXPECT_DOUBLE_EQ(kappa_hat(d, kLinear, kLinear, Region::Omega), 0.5);
    EXPECT_NEAR(kappa_hat(d, kRank, kRank, Region::Omega), 1.0 / 18, 1e-15);
    EXPECT_DOUBLE_EQ(kappa_hat(fixtures::example3_censored(), kSign, kSign, Region::Lambda), 1.0);
}

TEST(TestStat, KappaWithoutComparablePairsThrows) {
    const Dataset d(std::vector<Observation>{{0, 1, true}, {2, 3, true}});
    EXPECT_THROW(kappa_hat(d, kSign, kSign, Region::Omega), DegenerateDataset);
}

TEST(TestStat, PhiHandExample) {
    PairMatrix a(3);
    a.set(0, 1, 1);
    a.set(0, 2, 2);
    a.set(1, 2, 3);
    EXPECT_DOUBLE_EQ(phi_hat_fast(a), 22.0 / 6);
    EXPECT_DOUBLE_EQ(phi_hat_bruteforce(a), 22.0 / 6);
    EXPECT_EQ(phi_hat_fast(PairMatrix(4)), 0.0);
    EXPECT_EQ(phi_hat_bruteforce(PairMatrix(4)), 0.0);
}

TEST(TestStat, PhiSinglePairEnumeration) {
    // Only pair (0,1) comparable with product a: triples (0,1,2) and (1,0,2)
    // have a zero partner, so every ordered triple contributes 0.
    const Dataset d(std::vector<Observation>{{0, 3, true}, {1, 2, true}, {5, 6, true}});
    EXPECT_EQ(phi_hat_fast(d, kSign, kSign, Region::Omega), 0.0);
    EXPECT_EQ(phi_hat_bruteforce(d, kSign, kSign, Region::Omega), 0.0);
}

TEST(TestStat, PhiNeedsThree) {
    const Dataset d(std::vector<Observation>{{0, 3, true}, {1, 2, true}});
    EXPECT_THROW(phi_hat_fast(d, kSign, kSign, Region::Omega), DegenerateDataset);
    EXPECT_THROW(phi_hat_bruteforce(d, kSign, kSign, Region::Omega), DegenerateDataset);
}

TEST(TestStat, ChiSquareTail) {
    EXPECT_NEAR(chi_square1_upper_tail(3.841459), 0.05, 1e-6);
    EXPECT_EQ(chi_square1_upper_tail(0.0), 1.0);
    EXPECT_NEAR(chi_square_test(1, 1, 1, 4).p_value, chi_square1_upper_tail(1.0), 1e-15);
    EXPECT_NEAR(chi_square1_upper_tail(3.972), 0.046, 5e-4);
    // Independent route: P(|Z| > z) from the normal tail series at z = 1.
    EXPECT_NEAR(chi_square1_upper_tail(1.0), 0.31731050786291410, 1e-14);
}

TEST(TestStat, ChiSquareDegenerate) {
    EXPECT_THROW(chi_square_test(0.1, 0.0, 0.5, 10), DegenerateVariance);
    EXPECT_THROW(chi_square_test(0.1, 1.0, 0.0, 10), DegenerateVariance);
}

TEST(TestStat, ResultFieldsConsistent) {
    std::mt19937_64 rng(11);
    const auto d = fixtures::random_dataset(rng, 60);
    for (const auto& p : kStudyKernelPairs) {
        for (Region region : {Region::Omega, Region::Lambda}) {
            const auto r = quasi_independence_test(d, p.g, p.h, region);
            EXPECT_EQ(r.n, 60u);
            EXPECT_EQ(r.n_comparable, count_comparable(d, region));
            EXPECT_DOUBLE_EQ(r.pr_hat, r.n_comparable / (60.0 * 59.0 / 2.0));
            EXPECT_NEAR(r.chi_square, 60 * r.kappa_hat * r.kappa_hat * r.pr_hat * r.pr_hat / (4 * r.phi_hat),
                        1e-12 * (1 + r.chi_square));
            EXPECT_EQ(r.assumption_3b_required, region == Region::Lambda && p.h != kSign);
            EXPECT_EQ(r.censored_mode, region == Region::Lambda);
        }
    }
}

TEST(TestStat, ReverseRoles) {
    const auto d = fixtures::example3_censored();
    const auto r = reverse_roles(d);
    EXPECT_FALSE(r[0].event);
    EXPECT_TRUE(r[1].event);
    EXPECT_EQ(r[0].entry, 0.0);
    EXPECT_EQ(r[0].exit, 3.0);
    EXPECT_EQ(reverse_roles(r).observations(), d.observations());
}

TEST(TestStat, SerialAndParallelAgree) {
    std::mt19937_64 rng(5);
    for (std::size_t n : {3u, 17u, 64u, 150u}) {
        const auto d = fixtures::random_tied_dataset(rng, n);
        for (Region region : {Region::Omega, Region::Lambda}) {
            const auto a = pair_sums_serial(d, kStudyKernelPairs, region);
            const auto b = pair_sums_parallel(d, kStudyKernelPairs, region);
            EXPECT_EQ(a.n_comparable, b.n_comparable);
            for (std::size_t k = 0; k < a.per_pair.size(); ++k) {
                const auto& x = a.per_pair[k];
                const auto& y = b.per_pair[k];
                EXPECT_NEAR(x.u_numerator, y.u_numerator, 1e-10 * (1 + std::abs(x.u_numerator)));
                EXPECT_NEAR(x.hub_sum, y.hub_sum, 1e-10 * (1 + std::abs(x.hub_sum)));
            }
        }
    }
}

TEST(TestStat, ParallelIsBitStableAcrossThreadCounts) {
    std::mt19937_64 rng(9);
    const auto d = fixtures::random_dataset(rng, 300);
    omp_set_num_threads(1);
    const auto one = pair_sums_parallel(d, kStudyKernelPairs, Region::Lambda);
    omp_set_num_threads(4);
    const auto four = pair_sums_parallel(d, kStudyKernelPairs, Region::Lambda);
    for (std::size_t k = 0; k < one.per_pair.size(); ++k) {
        EXPECT_EQ(one.per_pair[k].u_numerator, four.per_pair[k].u_numerator);
        EXPECT_EQ(one.per_pair[k].hub_sum, four.per_pair[k].hub_sum);
    }
}
