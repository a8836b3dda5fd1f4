#pragma once

#include <functional>

namespace loopzeta {

/// Value of a definite integral together with an estimate of its absolute error.
struct Integral {
  double value = 0.0;
  double error = 0.0;

  Integral& operator+=(const Integral& other) {
    value += other.value;
    error += other.error;
    return *this;
  }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss–Kronrod (15/31) on [a, b]. `max_depth` bounds the
/// bisection depth; integrands carrying rounding noise (traces with large
/// cancellations) should use a small depth, since no refinement can beat the noise.
Integral integrate(const Integrand& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 12);

/// Integrates over the geometric panels [a, a r), [a r, a r^2), ..., [., b]
/// (a > 0). Integrands spanning many decades (t^{-1} tr e^{-t Delta}) need this
/// to keep each panel well resolved.
Integral integrate_geometric(const Integrand& f, double a, double b, double ratio = 2.0,
                             double rel_tol = 1e-13, unsigned max_depth = 12);

/// Integrates f over [a, infinity) with geometric panels, stopping once a panel
/// contributes less than `negligible` in absolute value and the panel start
/// exceeds `min_upper`. The returned error includes the last panel size as a
/// crude bound on the discarded remainder.
Integral integrate_to_infinity(const Integrand& f, double a, double min_upper, double negligible,
                               double ratio = 2.0, double rel_tol = 1e-13);

}  // namespace loopzeta
