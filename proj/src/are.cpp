#include "qi/are.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "qi/errors.hpp"
#include "qi/quadrature.hpp"

namespace qi {

Hazard Hazard::constant(double c) {
    return {[c](double) { return c; }, [c](double t) { return c * t; }};
}

Hazard Hazard::sum(const Hazard& a, const Hazard& b) {
    return {[a, b](double t) { return a.rate(t) + b.rate(t); },
            [a, b](double t) { return a.cumulative(t) + b.cumulative(t); }};
}

EntryLaw EntryLaw::exponential(double rate) {
    EntryLaw law;
    law.name = "Exp(" + std::to_string(rate) + ")";
    law.density = [rate](double l) { return l < 0.0 ? 0.0 : rate * std::exp(-rate * l); };
    law.cdf = [rate](double l) { return l < 0.0 ? 0.0 : -std::expm1(-rate * l); };
    return law;
}

EntryLaw EntryLaw::uniform01() {
    EntryLaw law;
    law.name = "Unif(0,1)";
    law.density = [](double l) { return (l < 0.0 || l > 1.0) ? 0.0 : 1.0; };
    law.cdf = [](double l) { return std::clamp(l, 0.0, 1.0); };
    law.support_end = 1.0;
    return law;
}

namespace {

AlternativeModel study_model(const EntryLaw& entry, double psi0, double psi1, RiskForm form) {
    AlternativeModel m;
    m.entry = entry;
    m.lambda0 = Hazard::constant(0.3);
    m.psi0 = Hazard::constant(psi0);
    m.psi1 = Hazard::constant(psi1);
    if (form == RiskForm::Excess) {
        m.lambda1 = Hazard::constant(1.0);
        m.alpha1 = [](double) { return 0.3; };
    } else {
        m.lambda1 = Hazard::constant(0.3);
        m.alpha1 = [](double) { return 1.0; };
    }
    m.horizon = entry.support_end;
    return m;
}

double entry_end(const AlternativeModel& m, double t) { return std::min(t, m.entry.support_end); }

// exp{-Gamma0 cum(l) - (Gamma1 cum(t) - Gamma1 cum(l))} f_L(l)
struct Weight {
    Hazard g0, g1;
    const EntryLaw& entry;
    double operator()(double t, double l) const {
        return std::exp(-g0.cumulative(l) - g1.cumulative(t) + g1.cumulative(l)) *
               entry.density(l);
    }
};

// State for the forward pass in u. Moments are m_phi(u) = int phi(l) w_u(l) dl
// over the current window; Q(u) = int a(l) {int_0^l w_u} w_u(l) dl.
enum Slot : std::size_t {
    kYbar, kMa, kQ, kMf, kMff, kMaf, kMl, kMll, kMal,
    kMuSign, kMuRank, kMuLinear, kS2Sign, kS2Rank, kS2Linear, kSlots
};
using State = std::array<double, kSlots>;

struct Forward {
    const AlternativeModel& m;
    Hazard g0, g1;
    bool pole;
    double residue;
    double f0;  // f_L(0)

    void operator()(const State& y, State& dy, double u) const {
        const double lam1 = m.lambda1.rate(u);
        const double lam_alpha = lam1 * m.alpha1(u);
        const double g = g1.rate(u);
        const double s = u < m.entry.support_end ? std::exp(-g0.cumulative(u)) * m.entry.density(u)
                                                 : 0.0;
        const double a = (pole || s == 0.0) ? 0.0 : m.a(u);
        const double f = m.entry.cdf(u);

        dy[kYbar] = s - g * y[kYbar];
        dy[kMa] = a * s - g * y[kMa];
        dy[kQ] = a * y[kYbar] * s - 2.0 * g * y[kQ];
        dy[kMf] = f * s - g * y[kMf];
        dy[kMff] = f * f * s - g * y[kMff];
        dy[kMaf] = a * f * s - g * y[kMaf];
        dy[kMl] = u * s - g * y[kMl];
        dy[kMll] = u * u * s - g * y[kMll];
        dy[kMal] = a * u * s - g * y[kMal];

        const double yb = y[kYbar];
        if (pole) {
            const double w0 = std::exp(-g1.cumulative(u)) * f0 * residue;
            dy[kMuSign] = lam1 * 0.5 * yb * w0;
            dy[kMuRank] = -lam1 * y[kMf] * w0;
            dy[kMuLinear] = -lam1 * y[kMl] * w0;
        } else {
            dy[kMuSign] = -lam1 * (y[kQ] - 0.5 * y[kMa] * yb);
            dy[kMuRank] = lam1 * (yb * y[kMaf] - y[kMa] * y[kMf]);
            dy[kMuLinear] = lam1 * (yb * y[kMal] - y[kMa] * y[kMl]);
        }
        dy[kS2Sign] = lam_alpha * yb * yb * yb / 12.0;
        dy[kS2Rank] = lam_alpha * yb * (yb * y[kMff] - y[kMf] * y[kMf]);
        dy[kS2Linear] = lam_alpha * yb * (yb * y[kMll] - y[kMl] * y[kMl]);
    }
};

constexpr double kOdeAbsTol = 1e-14;
constexpr double kOdeRelTol = 1e-11;

void advance(const Forward& system, State& state, double from, double to) {
    using namespace boost::numeric::odeint;
    auto stepper = make_controlled(kOdeAbsTol, kOdeRelTol, runge_kutta_dopri5<State>());
    integrate_adaptive(stepper, system, state, from, to, std::min(1e-3, 0.01 * (to - from)));
}

}  // namespace

AlternativeModel model_m1(const EntryLaw& entry, double psi0, double psi1, RiskForm form) {
    auto m = study_model(entry, psi0, psi1, form);
    m.a = [](double l) { return l; };
    return m;
}

AlternativeModel model_m2(const EntryLaw& entry, double psi0, double psi1, RiskForm form) {
    auto m = study_model(entry, psi0, psi1, form);
    m.a = [](double l) { return 1.0 / (l * l + std::sin(l)); };
    m.pole_residue = 1.0;
    return m;
}

std::string to_string(AreTest test) {
    switch (test) {
        case AreTest::SignSign: return "sign/sign";
        case AreTest::RankSign: return "rank/sign";
        case AreTest::LinearSign: return "linear/sign";
    }
    return "?";
}

double ybar(const AlternativeModel& model, double t) {
    const double top = entry_end(model, t);
    if (!(top > 0.0)) return 0.0;
    const Weight w{model.gamma0(), model.gamma1(), model.entry};
    return integrate([&](double l) { return w(t, l); }, 0.0, top);
}

double conditional_entry_density(const AlternativeModel& model, double t, double l) {
    const double top = entry_end(model, t);
    if (!(l >= 0.0 && l < top)) return 0.0;
    const Weight w{model.gamma0(), model.gamma1(), model.entry};
    return w(t, l) / ybar(model, t);
}

double conditional_entry_cdf(const AlternativeModel& model, double t, double l) {
    const double top = entry_end(model, t);
    if (l <= 0.0) return 0.0;
    if (l >= top) return 1.0;
    const Weight w{model.gamma0(), model.gamma1(), model.entry};
    return integrate([&](double s) { return w(t, s); }, 0.0, l) / ybar(model, t);
}

double sigma_xy(const AlternativeModel& model, double t, const RealFunction& x,
                const RealFunction& y) {
    const double top = entry_end(model, t);
    if (!(top > 0.0)) return 0.0;
    const Weight w{model.gamma0(), model.gamma1(), model.entry};
    const double norm = integrate([&](double l) { return w(t, l); }, 0.0, top);
    const auto mean = [&](const RealFunction& fn) {
        return integrate([&](double l) { return fn(l) * w(t, l); }, 0.0, top) / norm;
    };
    const double exy = mean([&](double l) { return x(l) * y(l); });
    return exy - mean(x) * mean(y);
}

std::array<EfficacyResult, 3> efficacies(const AlternativeModel& model) {
    const bool pole = model.pole_residue.has_value();
    const Forward system{model, model.gamma0(), model.gamma1(), pole,
                         pole ? *model.pole_residue : 0.0, model.entry.density(0.0)};
    State state{};

    const double support = model.entry.support_end;
    const double horizon = model.horizon;
    double u = 0.0;
    if (std::isfinite(horizon)) {
        // The source term switches off at the end of the entry support.
        if (support < horizon) {
            advance(system, state, 0.0, support);
            u = support;
        }
        advance(system, state, u, horizon);
    } else {
        // March until the risk proportion is negligible against its peak.
        double peak = 0.0;
        double step = 0.5;
        while (true) {
            double next = u + step;
            if (support > u && support < next) next = support;
            advance(system, state, u, next);
            u = next;
            peak = std::max(peak, state[kYbar]);
            if (u > 1.0 && state[kYbar] < 1e-13 * peak) break;
            if (u > 1e4) throw IntegrationFailure("efficacies: risk set does not vanish");
            step = std::min(2.0 * step, 8.0);
        }
    }
    for (double v : state) {
        if (!std::isfinite(v)) throw IntegrationFailure("efficacies: non-finite state");
    }

    std::array<EfficacyResult, 3> out;
    const AreTest tests[] = {AreTest::SignSign, AreTest::RankSign, AreTest::LinearSign};
    const Slot mu[] = {kMuSign, kMuRank, kMuLinear};
    const Slot s2[] = {kS2Sign, kS2Rank, kS2Linear};
    for (std::size_t k = 0; k < 3; ++k) {
        auto& r = out[k];
        r.test_id = tests[k];
        r.leading_order = pole;
        r.mu_inf = model.beta * state[mu[k]];
        r.sigma2_inf = state[s2[k]];
        if (!(r.sigma2_inf > 0.0)) {
            throw IntegrationFailure("efficacies: non-positive limiting variance for " +
                                     to_string(tests[k]));
        }
        r.efficacy = r.mu_inf * r.mu_inf / r.sigma2_inf;
    }
    return out;
}

EfficacyResult efficacy(const AlternativeModel& model, AreTest test) {
    return efficacies(model)[static_cast<std::size_t>(test)];
}

double pitman_are(const AlternativeModel& model, AreTest test_a, AreTest test_b) {
    const auto all = efficacies(model);
    const double denom = all[static_cast<std::size_t>(test_b)].efficacy;
    if (!(denom > 0.0)) throw IntegrationFailure("pitman_are: reference efficacy is zero");
    return all[static_cast<std::size_t>(test_a)].efficacy / denom;
}

std::vector<AreCell> are_table(RiskForm form) {
    struct Config {
        int model;
        int entry;
        double psi0, psi1;
    };
    const double psis[3][2] = {{0, 0}, {0, 1}, {1, 1}};
    std::vector<Config> configs;
    for (int m = 0; m < 2; ++m)
        for (int e = 0; e < 2; ++e)
            for (const auto& p : psis) configs.push_back({m, e, p[0], p[1]});

    std::vector<std::array<EfficacyResult, 3>> results(configs.size());
    const auto count = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < count; ++k) {
        const auto& c = configs[static_cast<std::size_t>(k)];
        const EntryLaw law = c.entry == 0 ? EntryLaw::exponential(2.0) : EntryLaw::uniform01();
        const auto model = c.model == 0 ? model_m1(law, c.psi0, c.psi1, form)
                                        : model_m2(law, c.psi0, c.psi1, form);
        results[static_cast<std::size_t>(k)] = efficacies(model);
    }

    std::vector<AreCell> cells;
    for (int m = 0; m < 2; ++m) {
        for (AreTest test : {AreTest::RankSign, AreTest::LinearSign}) {
            for (std::size_t k = 0; k < configs.size(); ++k) {
                const auto& c = configs[k];
                if (c.model != m) continue;
                const auto& r = results[k];
                AreCell cell;
                cell.model = m == 0 ? "M1" : "M2";
                cell.entry = c.entry == 0 ? "Exp(2)" : "Unif(0,1)";
                cell.psi0 = c.psi0;
                cell.psi1 = c.psi1;
                cell.test = test;
                cell.are = r[static_cast<std::size_t>(test)].efficacy / r[0].efficacy;
                cell.leading_order = r[0].leading_order;
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

}  // namespace qi
