#include "loopzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "loopzeta/error.hpp"

namespace loopzeta {

Integral integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  // Boost compares the Kronrod difference of each subinterval, measured before
  // rescaling by the half-width, against a tolerance on the rescaled value.
  // Integrating over [-1, 1] keeps the two on the same scale.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&](double x) { return half * f(mid + half * x); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, -1.0, 1.0, max_depth, rel_tol, &error, &l1);
  // Boost reports the Kronrod difference; add a rounding floor.
  error = std::max(error, 4.0 * std::numeric_limits<double>::epsilon() * l1);
  return {value, error};
}

Integral integrate_geometric(const Integrand& f, double a, double b, double ratio,
                             double rel_tol, unsigned max_depth) {
  if (!(a > 0.0) || !(b >= a) || !(ratio > 1.0)) {
    throw InvalidArgument("integrate_geometric: need 0 < a <= b and ratio > 1");
  }
  Integral total;
  double lo = a;
  while (lo < b) {
    double hi = std::min(lo * ratio, b);
    // Avoid a sliver panel at the end.
    if (hi < b && b / hi < std::sqrt(ratio)) hi = b;
    total += integrate(f, lo, hi, rel_tol, max_depth);
    lo = hi;
  }
  return total;
}

Integral integrate_to_infinity(const Integrand& f, double a, double min_upper, double negligible,
                               double ratio, double rel_tol) {
  if (!(a > 0.0) || !(ratio > 1.0)) {
    throw InvalidArgument("integrate_to_infinity: need a > 0 and ratio > 1");
  }
  Integral total;
  double lo = a;
  for (int panel = 0; panel < 4000; ++panel) {
    const double hi = lo * ratio;
    const Integral piece = integrate(f, lo, hi, rel_tol);
    total += piece;
    if (lo >= min_upper && std::abs(piece.value) < negligible) {
      total.error += std::abs(piece.value);
      return total;
    }
    lo = hi;
  }
  throw NumericalError("integrate_to_infinity: integrand does not decay");
}

}  // namespace loopzeta
