#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qi {

using RealFunction = std::function<double(double)>;

/// A hazard rate together with its cumulative integral from 0.
struct Hazard {
    RealFunction rate;
    RealFunction cumulative;

    static Hazard constant(double c);
    static Hazard sum(const Hazard& a, const Hazard& b);
};

/// Distribution of the entry time L.
struct EntryLaw {
    std::string name;
    RealFunction density;
    RealFunction cdf;
    double support_end = std::numeric_limits<double>::infinity();

    static EntryLaw exponential(double rate);
    static EntryLaw uniform01();
};

/// Contiguous hazard alternative
///   lambda(t | L) = lambda1(t) { alpha1(t) + n^{-1/2} a(L) beta },
/// with censoring hazards psi0 (not entered) and psi1 (entered) and
/// Gamma_i = psi_i + lambda_i.
struct AlternativeModel {
    EntryLaw entry;
    Hazard lambda0;
    Hazard lambda1;
    Hazard psi0;
    Hazard psi1;
    RealFunction alpha1;
    RealFunction a;
    /// Set when a(l) ~ residue / l as l -> 0; mu(inf) then diverges and the
    /// efficacy is reported to leading order in the pole.
    std::optional<double> pole_residue;
    double beta = 1.0;
    /// Upper limit of the outer time integral.
    double horizon = std::numeric_limits<double>::infinity();

    Hazard gamma0() const { return Hazard::sum(psi0, lambda0); }
    Hazard gamma1() const { return Hazard::sum(psi1, lambda1); }
};

enum class RiskForm { Relative, Excess };

/// Study models with lambda0 = 0.3 and constant censoring hazards. In the
/// excess form lambda1 = 1 and alpha1 = 0.3; in the relative form
/// lambda1 = 0.3 and alpha1 = 1. The horizon is the end of the entry support.
///   M1: a(l) = l
///   M2: a(l) = 1 / (l^2 + sin l)
AlternativeModel model_m1(const EntryLaw& entry, double psi0, double psi1,
                          RiskForm form = RiskForm::Excess);
AlternativeModel model_m2(const EntryLaw& entry, double psi0, double psi1,
                          RiskForm form = RiskForm::Excess);

enum class AreTest { SignSign, RankSign, LinearSign };

std::string to_string(AreTest test);

struct EfficacyResult {
    double mu_inf = 0.0;
    double sigma2_inf = 0.0;
    double efficacy = 0.0;
    AreTest test_id = AreTest::SignSign;
    /// mu_inf is the coefficient of the divergent log term (pole models).
    bool leading_order = false;
};

/// Denominator of the conditional entry density at time t.
double ybar(const AlternativeModel& model, double t);

/// f_t(l); zero outside (0, t) and beyond the entry support.
double conditional_entry_density(const AlternativeModel& model, double t, double l);

/// Distribution function of f_t.
double conditional_entry_cdf(const AlternativeModel& model, double t, double l);

/// Covariance of X(L) and Y(L) when L has density f_t.
double sigma_xy(const AlternativeModel& model, double t, const RealFunction& x,
                const RealFunction& y);

/// Efficacies of the three sign-h tests from one pass over time. The
/// covariate process is 1 - F_t(l) for SignSign, F_L(l) for RankSign and l
/// for LinearSign.
std::array<EfficacyResult, 3> efficacies(const AlternativeModel& model);

EfficacyResult efficacy(const AlternativeModel& model, AreTest test);

/// efficacy(test_a) / efficacy(test_b).
double pitman_are(const AlternativeModel& model, AreTest test_a, AreTest test_b);

struct AreCell {
    std::string model;   // "M1" or "M2"
    std::string entry;   // "Exp(2)" or "Unif(0,1)"
    double psi0 = 0.0;
    double psi1 = 0.0;
    AreTest test = AreTest::RankSign;
    double are = 0.0;    // relative to SignSign
    bool leading_order = false;
};

/// The 24 cells {M1, M2} x {Rank, Linear} x {Exp(2), Unif(0,1)} x
/// {(0,0), (0,1), (1,1)}, ordered by model, then test, then entry, then psi.
std::vector<AreCell> are_table(RiskForm form = RiskForm::Excess);

}  // namespace qi
