#pragma once

#include <functional>

namespace qi {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    unsigned max_depth = 18;
};

/// Adaptive 61-point Gauss-Kronrod integral of f over [a, b] (finite).
/// Throws IntegrationFailure when the error estimate exceeds the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions options = {});

}  // namespace qi
