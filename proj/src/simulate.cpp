#include "qi/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "qi/errors.hpp"
#include "qi/teststat.hpp"

namespace qi {

namespace {

constexpr std::size_t kCalibrationDraws = 100000;
constexpr std::uint64_t kCalibrationStream = 0x8000000000000001ULL;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Latent {
    double entry;
    double failure;
};

Latent draw_latent(Family family, std::mt19937_64& rng) {
    switch (family) {
        case Family::ExpNull:
        case Family::ExpLinear:
        case Family::ExpNonlinear: {
            const double l = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
            double hazard = 0.3;
            if (family == Family::ExpLinear) hazard = 0.3 * (1.0 - l / 12.0);
            if (family == Family::ExpNonlinear) hazard = 0.3 / ((l - 2.5) * (l - 2.5) + 2.0);
            const double x = std::exponential_distribution<double>(hazard)(rng);
            return {l, x};
        }
        case Family::NormalNull:
        case Family::NormalAlt: {
            const double rho = family == Family::NormalAlt ? 0.15 : 0.0;
            std::normal_distribution<double> z;
            const double z1 = z(rng);
            const double z2 = z(rng);
            return {-1.0 + z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2};
        }
    }
    return {0.0, 0.0};
}

struct Pool {
    std::vector<double> entry, failure, unit_censor;
};

Pool calibration_pool(const SimScenario& scenario) {
    std::mt19937_64 rng(substream_seed(scenario.seed, kCalibrationStream));
    Pool pool;
    pool.entry.reserve(kCalibrationDraws);
    pool.failure.reserve(kCalibrationDraws);
    pool.unit_censor.reserve(kCalibrationDraws);
    std::exponential_distribution<double> unit(1.0);
    for (std::size_t k = 0; k < kCalibrationDraws; ++k) {
        const auto lat = draw_latent(scenario.family, rng);
        pool.entry.push_back(lat.entry);
        pool.failure.push_back(lat.failure);
        pool.unit_censor.push_back(unit(rng));
    }
    return pool;
}

double censored_fraction(const Pool& pool, double rate) {
    std::size_t kept = 0, censored = 0;
    for (std::size_t k = 0; k < pool.entry.size(); ++k) {
        const double c = rate > 0.0 ? pool.unit_censor[k] / rate
                                    : std::numeric_limits<double>::infinity();
        if (!(pool.entry[k] < std::min(pool.failure[k], c))) continue;
        ++kept;
        if (c < pool.failure[k]) ++censored;
    }
    if (kept == 0) throw CalibrationFailure("calibrate_censoring: no draw survives truncation");
    return static_cast<double>(censored) / static_cast<double>(kept);
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::ExpNull: return "exp-null";
        case Family::ExpLinear: return "exp-linear";
        case Family::ExpNonlinear: return "exp-nonlinear";
        case Family::NormalNull: return "normal-null";
        case Family::NormalAlt: return "normal-alt";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Family f : {Family::ExpNull, Family::ExpLinear, Family::ExpNonlinear, Family::NormalNull,
                     Family::NormalAlt}) {
        if (lower == to_string(f)) return f;
    }
    return std::nullopt;
}

bool is_null(Family family) { return family == Family::ExpNull || family == Family::NormalNull; }

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

Dataset generate_dataset(const SimScenario& scenario, std::mt19937_64& rng) {
    const double rate = scenario.censoring_rate;
    std::exponential_distribution<double> unit(1.0);
    std::vector<Observation> obs;
    obs.reserve(scenario.target_n);
    std::uint64_t attempts = 0;
    while (obs.size() < scenario.target_n) {
        const auto lat = draw_latent(scenario.family, rng);
        const double c = rate > 0.0 ? unit(rng) / rate : std::numeric_limits<double>::infinity();
        ++attempts;
        const double exit = std::min(lat.failure, c);
        if (lat.entry < exit) {
            obs.push_back({lat.entry, exit, lat.failure <= c});
        } else if ((attempts & ((1u << 23) - 1)) == 0 &&
                   static_cast<double>(obs.size()) < 1e-6 * static_cast<double>(attempts)) {
            throw GenerationStall("generate_dataset: acceptance fraction below 1e-6 for " +
                                  to_string(scenario.family));
        }
    }
    return Dataset(obs);
}

double pool_censored_fraction(const SimScenario& scenario, double rate) {
    return censored_fraction(calibration_pool(scenario), rate);
}

double calibrate_censoring(const SimScenario& scenario, double target_rate) {
    if (target_rate == 0.0) return 0.0;
    if (!(target_rate > 0.0 && target_rate < 1.0)) {
        throw CalibrationFailure("calibrate_censoring: target must lie in (0, 1)");
    }
    const Pool pool = calibration_pool(scenario);
    double lo = 0.0;
    double hi = 0.05;
    while (censored_fraction(pool, hi) < target_rate) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) throw CalibrationFailure("calibrate_censoring: cannot bracket target");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (censored_fraction(pool, mid) < target_rate) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (std::abs(censored_fraction(pool, hi) - target_rate) > 0.005) {
        throw CalibrationFailure("calibrate_censoring: target not reachable within 0.005");
    }
    return hi;
}

ExperimentReport run_experiment(SimScenario scenario, std::span<const KernelPair> kernels,
                                std::size_t replicates, double level) {
    if (replicates == 0) throw Error("run_experiment: replicates must be at least 1");
    if (scenario.censoring_target > 0.0 && scenario.censoring_rate == 0.0) {
        scenario.censoring_rate = calibrate_censoring(scenario, scenario.censoring_target);
    }
    const Region region = region_for(scenario.censored());
    const std::size_t m = kernels.size();

    std::vector<std::uint8_t> rejected(replicates * m, 0);
    std::vector<double> kappa(replicates * m, 0.0);
    std::vector<std::uint8_t> degenerate(replicates, 0);
    std::vector<std::uint32_t> censored(replicates, 0);
    std::vector<std::string> failure(replicates);

    const auto count = static_cast<std::int64_t>(replicates);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t ri = 0; ri < count; ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        try {
            std::mt19937_64 rng(substream_seed(scenario.seed, r));
            const Dataset data = generate_dataset(scenario, rng);
            censored[r] = static_cast<std::uint32_t>(data.size() - data.event_count());
            const auto results = quasi_independence_tests(data, kernels, region);
            for (std::size_t k = 0; k < m; ++k) {
                rejected[r * m + k] = results[k].p_value <= level ? 1 : 0;
                kappa[r * m + k] = results[k].kappa_hat;
            }
        } catch (const DegenerateDataset&) {
            degenerate[r] = 1;
        } catch (const DegenerateVariance&) {
            degenerate[r] = 1;
        } catch (const std::exception& e) {
            failure[r] = e.what();
        }
    }
    for (const auto& f : failure) {
        if (!f.empty()) throw Error("run_experiment: " + f);
    }

    ExperimentReport report;
    report.scenario = scenario;
    report.level = level;
    report.replicates = replicates;
    for (std::size_t r = 0; r < replicates; ++r) {
        report.degenerate += degenerate[r];
        report.observations += scenario.target_n;
        report.censored_observations += censored[r];
    }
    report.mean_censoring_fraction = static_cast<double>(report.censored_observations) /
                                     static_cast<double>(report.observations);
    const std::size_t valid = replicates - report.degenerate;

    for (std::size_t k = 0; k < m; ++k) {
        KernelTally t;
        t.pair = kernels[k];
        t.assumption_3b_required = requires_censoring_quasi_independence(kernels[k].h, region);
        double sum = 0.0;
        for (std::size_t r = 0; r < replicates; ++r) {
            if (degenerate[r]) continue;
            t.rejections += rejected[r * m + k];
            sum += kappa[r * m + k];
        }
        if (valid > 0) {
            const double v = static_cast<double>(valid);
            t.rejection_rate = static_cast<double>(t.rejections) / v;
            t.monte_carlo_se = std::sqrt(t.rejection_rate * (1.0 - t.rejection_rate) / v);
            t.kappa_mean = sum / v;
            double ss = 0.0;
            for (std::size_t r = 0; r < replicates; ++r) {
                if (degenerate[r]) continue;
                const double d = kappa[r * m + k] - t.kappa_mean;
                ss += d * d;
            }
            t.kappa_sd = valid > 1 ? std::sqrt(ss / (v - 1.0)) : 0.0;
        }
        report.kernels.push_back(t);
    }

    if (report.degenerate > 0) {
        report.notes.push_back(std::to_string(report.degenerate) +
                               " degenerate replicate(s) excluded from the rates");
    }
    if (scenario.censored() &&
        std::any_of(report.kernels.begin(), report.kernels.end(),
                    [](const KernelTally& t) { return t.assumption_3b_required; })) {
        report.notes.push_back(
            "kernels with h != sign need L and C quasi-independent; censoring is generated "
            "independently of (L, X), so the assumption holds in this scenario");
    }
    return report;
}

}  // namespace qi
