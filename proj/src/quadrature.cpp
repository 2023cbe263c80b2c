#include "qi/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "qi/errors.hpp"

namespace qi {

double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions options) {
    if (a == b) return 0.0;
    // Boost reports the per-panel error on the reference interval without the
    // (b - a) / 2 Jacobian, so integrate over [0, 1] where that factor is fixed.
    const double width = b - a;
    const auto g = [&](double s) { return f(a + width * s); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = width * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                     g, 0.0, 1.0, options.max_depth, options.rel_tol, &error, &l1);
    if (!std::isfinite(value)) throw IntegrationFailure("integrate: non-finite result");
    if (error > 10.0 * options.rel_tol * l1) {
        throw IntegrationFailure("integrate: tolerance not met on [" + std::to_string(a) + ", " +
                                 std::to_string(b) + "], error estimate " +
                                 std::to_string(error * std::abs(width)));
    }
    return value;
}

}  // namespace qi
