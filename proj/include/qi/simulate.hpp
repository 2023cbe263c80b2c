#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qi/comparability.hpp"
#include "qi/pair_sums.hpp"

namespace qi {

/// Generative models for (L, X).
///   Exp*: L ~ U[0,5], X | L exponential with hazard 0.3, 0.3 (1 - L/12) or
///         0.3 / {(L - 2.5)^2 + 2}.
///   Normal*: (L, X) bivariate normal, mean (-1, 0), unit variances,
///         correlation 0 (null) or 0.15.
enum class Family { ExpNull, ExpLinear, ExpNonlinear, NormalNull, NormalAlt };

std::string to_string(Family family);
std::optional<Family> parse_family(std::string_view name);
bool is_null(Family family);

struct SimScenario {
    Family family = Family::ExpNull;
    std::size_t target_n = 400;
    /// Post-truncation censored fraction to calibrate for; 0 disables censoring.
    double censoring_target = 0.0;
    /// Exponential censoring rate. When zero and censoring_target > 0,
    /// run_experiment calibrates it.
    double censoring_rate = 0.0;
    std::uint64_t seed = 1;

    bool censored() const { return censoring_target > 0.0 || censoring_rate > 0.0; }
};

/// Seed of substream `stream` derived from a master seed by SplitMix64
/// mixing; distinct streams are statistically independent.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// Draws (L, X, C) until target_n triples satisfy L < min(X, C). C is
/// exponential with scenario.censoring_rate (absent when the rate is 0).
/// Throws GenerationStall when the acceptance fraction falls below 1e-6.
Dataset generate_dataset(const SimScenario& scenario, std::mt19937_64& rng);

/// Exponential censoring rate giving the requested post-truncation censored
/// fraction, by bisection over a fixed pool of 1e5 latent draws. Returns 0
/// for target 0. Throws CalibrationFailure when no bracketing rate exists.
double calibrate_censoring(const SimScenario& scenario, double target_rate);

/// Censored fraction among truncation survivors of the calibration pool.
double pool_censored_fraction(const SimScenario& scenario, double rate);

struct KernelTally {
    KernelPair pair;
    std::uint64_t rejections = 0;
    double rejection_rate = 0.0;
    double monte_carlo_se = 0.0;
    double kappa_mean = 0.0;
    double kappa_sd = 0.0;
    bool assumption_3b_required = false;
};

struct ExperimentReport {
    SimScenario scenario;       // with the resolved censoring rate
    double level = 0.05;
    std::size_t replicates = 0;
    std::size_t degenerate = 0; // excluded replicates
    std::vector<KernelTally> kernels;
    std::uint64_t observations = 0;
    std::uint64_t censored_observations = 0;
    double mean_censoring_fraction = 0.0;
    std::vector<std::string> notes;
};

/// Replicate r uses the substream substream_seed(scenario.seed, r). Every
/// kernel pair is evaluated on the same dataset, in Lambda mode when the
/// scenario is censored and Omega mode otherwise. Rates are taken over the
/// non-degenerate replicates. Bit-identical for a fixed seed regardless of
/// thread count.
ExperimentReport run_experiment(SimScenario scenario, std::span<const KernelPair> kernels,
                                std::size_t replicates, double level);

}  // namespace qi
