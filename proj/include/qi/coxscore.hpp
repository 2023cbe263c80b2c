#pragma once

#include <functional>

#include "qi/comparability.hpp"

namespace qi {

/// Weighted Cox score statistics with weight q(t) = Y(t), the number at risk,
/// where subject j is at risk at t when L_j < t <= T_j.
///
/// Sweep sorts the times once and maintains the risk set incrementally
/// (O(n log n)); Direct evaluates the defining sums literally (O(n^2) for a
/// fixed covariate, O(n^2 log n) for the rank covariate) and serves as the
/// oracle for Sweep.
enum class ScoreMethod { Sweep, Direct };

using Covariate = std::function<double(double)>;

/// sum_i delta_i Y(T_i) { a(L_i) - sum_j Y_j(T_i) a(L_j) / Y(T_i) }.
double cox_score_covariate(const Dataset& data, const Covariate& a,
                           ScoreMethod method = ScoreMethod::Sweep);

/// Score with the time-varying covariate R_i(t) / Y(t), where
/// R_i(t) = 1 + #{j at risk at t : L_i < L_j}.
double cox_score_rankstar(const Dataset& data, ScoreMethod method = ScoreMethod::Sweep);

/// Pairwise form of the covariate score:
///   -sum_{i<j} {a(L_i) - a(L_j)} sign(T_i - T_j) I(Lambda_ij).
/// Equals cox_score_covariate on data without tied times.
double cox_covariate_pairwise(const Dataset& data, const Covariate& a);

/// Pairwise form of the rank score:
///   1/2 sum_{i<j} sign(L_i - L_j) sign(T_i - T_j) I(Lambda_ij).
/// Equals cox_score_rankstar on data without tied times. The variant
///   -1/2 sum_{i<j} ... + 1/2 sum_i delta_i
/// that also circulates for this score does not hold in general: it mixes the
/// j = i term into the risk-set rank sum and flips the sign of the pair sum
/// (two disjoint subjects with events give 0 on the left and 1 on the right).
double cox_rankstar_pairwise(const Dataset& data);

/// True when some value occurs twice among the pooled entry and exit times.
bool has_tied_times(const Dataset& data);

}  // namespace qi
