#include <gtest/gtest.h>

#include "qi/comparability.hpp"
#include "qi/errors.hpp"
#include "support.hpp"

using namespace qi;

TEST(Comparability, OmegaExamples) {
    EXPECT_TRUE(omega({0, 3, true}, {1, 2, true}));
    EXPECT_FALSE(omega({0, 1, true}, {2, 3, true}));
    EXPECT_TRUE(omega({0, 2, true}, {1, 2, true}));
    EXPECT_FALSE(omega({0, 1, true}, {1, 2, true}));
}

TEST(Comparability, LambdaExamples) {
    EXPECT_FALSE(lambda({0, 3, true}, {1, 2, false}));
    EXPECT_TRUE(lambda({0, 3, true}, {1.5, 4, true}));
    EXPECT_TRUE(lambda({0, 3, true}, {1, 2, true}));
}

TEST(Comparability, LambdaTiedExitsNeedBothEvents) {
    EXPECT_FALSE(lambda({0, 3, true}, {1, 3, false}));
    EXPECT_TRUE(lambda({0, 3, true}, {1, 3, true}));
}

TEST(Comparability, CountExamples) {
    EXPECT_EQ(count_comparable(fixtures::example3(), Region::Omega), 2u);
    EXPECT_EQ(count_comparable(Dataset(std::vector<Observation>{{0, 1, true}}), Region::Omega), 0u);
    EXPECT_EQ(count_comparable(fixtures::example3_censored(), Region::Lambda), 1u);
}

TEST(Comparability, DatasetValidation) {
    EXPECT_THROW(Dataset(std::vector<Observation>{{1, 1, true}}), ValidationError);
    EXPECT_THROW(Dataset(std::vector<Observation>{}), DegenerateDataset);
    try {
        Dataset(std::vector<Observation>{{0, 1, true}, {2, 1, true}});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.row(), 1u);
    }
}

TEST(Comparability, Symmetry) {
    std::mt19937_64 rng(3);
    const auto d = fixtures::random_tied_dataset(rng, 40);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            EXPECT_EQ(omega(d[i], d[j]), omega(d[j], d[i]));
            EXPECT_EQ(lambda(d[i], d[j]), lambda(d[j], d[i]));
            if (lambda(d[i], d[j])) EXPECT_TRUE(omega(d[i], d[j]));
        }
    }
}
