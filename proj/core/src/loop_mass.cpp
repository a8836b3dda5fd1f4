#include "loopzeta/loop_mass.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"

namespace loopzeta {

namespace {

double e1(double x) { return boost::math::expint(1, x); }

// int_{u_lo}^{u_hi} u^{-1} e^{-kappa u/2} du
double zero_mode_window(double u_lo, double u_hi, double kappa) {
  if (kappa == 0.0) return std::log(u_hi / u_lo);
  const double upper = std::isinf(u_hi) ? 0.0 : e1(kappa * u_hi / 2.0);
  return e1(kappa * u_lo / 2.0) - upper;
}

HeatTraceEngine engine_for(const ModelSurface& surface, double t_lowest) {
  const double floor = HeatTraceEngine::default_t_min(surface);
  return HeatTraceEngine(surface, floor > 0.0 ? std::min(floor, t_lowest) : 0.0);
}

// Upper limit beyond which weight(u) * excess(u/2) integrates to < 1e-18,
// from excess(t) <= excess(T) e^{-lambda_1 (t - T)} and weight ~ u^{p-1}.
double spectral_cutoff(const HeatTraceEngine& engine, double start, double power, double& bound) {
  const double gap = spectral_gap(engine.surface()).value;
  double upper = std::max(start, 2.0 / gap);
  for (int i = 0; i < 200; ++i) {
    const double rate = gap / 2.0 - std::max(power - 1.0, 0.0) / upper;
    bound = rate > 0.0 ? engine.excess(upper / 2.0) * std::pow(upper, power - 1.0) / rate : 1.0;
    if (rate > 0.0 && bound < 1e-18) return upper;
    upper *= 1.5;
  }
  throw NumericalError("loop mass: spectral tail does not decay");
}

double expansion_boundary(const HeatCoefficients& c, double delta, double log_det) {
  return c.a / delta + 2.0 * c.b / std::sqrt(delta) - c.c * (std::log(delta) + kEulerGamma) - log_det;
}

double expansion_closed_core(const HeatCoefficients& c, double delta, double log_det) {
  return c.a / delta - c.c * (std::log(delta) + kEulerGamma) - log_det;
}

}  // namespace

Integral loop_mass(const HeatTraceEngine& engine, double qv_low, double qv_high, double kappa,
                   double panel_ratio) {
  if (!(qv_low > 0.0)) throw InvalidArgument("loop mass: qv_low must be positive");
  if (!(kappa >= 0.0)) throw InvalidArgument("loop mass: kappa must be non-negative");
  if (std::isinf(qv_low)) return {};
  if (qv_high < qv_low) throw InvalidArgument("loop mass: need qv_low < qv_high");
  if (qv_high == qv_low) return {};
  const bool closed = engine.surface().is_closed();
  if (closed && kappa == 0.0 && std::isinf(qv_high)) {
    throw InvalidArgument("loop mass: divergent query (closed surface, kappa = 0, qv_high = inf)");
  }
  const double u_lo = qv_low / 2.0;
  const double u_hi = qv_high / 2.0;
  auto f = [&](double u) { return std::exp(-kappa * u / 2.0) * engine.excess(u / 2.0) / u; };
  Integral result;
  if (std::isinf(u_hi)) {
    double bound = 0.0;
    const double upper = spectral_cutoff(engine, u_lo, 0.0, bound);
    result = integrate_geometric(f, u_lo, upper, panel_ratio);
    result.error += bound;
  } else {
    result = integrate_geometric(f, u_lo, u_hi, panel_ratio);
  }
  if (closed) result.value += engine.surface().zero_modes() * zero_mode_window(u_lo, u_hi, kappa);
  return result;
}

double loop_mass(const LoopMassQuery& query) {
  const HeatTraceEngine engine = engine_for(query.surface, query.qv_low / 4.0);
  return loop_mass(engine, query.qv_low, query.qv_high, query.kappa).value;
}

Integral loop_mass_t_form(const HeatTraceEngine& engine, double qv_low, double qv_high, double kappa) {
  if (!(qv_low > 0.0) || !(qv_high > qv_low)) throw InvalidArgument("loop mass: need 0 < qv_low < qv_high");
  const bool closed = engine.surface().is_closed();
  if (closed && kappa == 0.0 && std::isinf(qv_high)) {
    throw InvalidArgument("loop mass: divergent query (closed surface, kappa = 0, qv_high = inf)");
  }
  const double t_lo = qv_low / 4.0;
  const double t_hi = qv_high / 4.0;
  auto f = [&](double t) { return std::exp(-kappa * t) * engine.excess(t) / t; };
  Integral result;
  if (std::isinf(t_hi)) {
    const double gap = spectral_gap(engine.surface()).value;
    result = integrate_to_infinity(f, t_lo, 1.0 / gap, 1e-19);
  } else {
    result = integrate_geometric(f, t_lo, t_hi);
  }
  if (closed) {
    const double n = engine.surface().zero_modes();
    if (kappa == 0.0) {
      result.value += n * std::log(t_hi / t_lo);
    } else {
      result.value += n * (e1(kappa * t_lo) - (std::isinf(t_hi) ? 0.0 : e1(kappa * t_hi)));
    }
  }
  return result;
}

double theorem_residual_boundary(const HeatTraceEngine& engine, double delta, double log_det) {
  if (engine.surface().is_closed()) throw InvalidArgument("theorem_residual_boundary: surface has no boundary");
  const double lhs = loop_mass(engine, 4.0 * delta, kInfinity).value;
  return lhs - expansion_boundary(engine.coefficients(), delta, log_det);
}

double theorem_residual_boundary(const ModelSurface& surface, double delta) {
  const HeatTraceEngine engine = engine_for(surface, delta);
  return theorem_residual_boundary(engine, delta, log_det_zeta(engine, 0.1).log_det);
}

double theorem_residual_closed(const HeatTraceEngine& engine, double delta, double cap_c, double log_det) {
  if (!engine.surface().is_closed()) throw InvalidArgument("theorem_residual_closed: surface is not closed");
  if (!(cap_c > delta)) throw InvalidArgument("theorem_residual_closed: need C > delta");
  const double lhs = loop_mass(engine, 4.0 * delta, 4.0 * cap_c).value;
  return lhs - (expansion_closed_core(engine.coefficients(), delta, log_det) + std::log(cap_c) + kEulerGamma);
}

double theorem_residual_closed(const ModelSurface& surface, double delta, double cap_c) {
  const HeatTraceEngine engine = engine_for(surface, delta);
  return theorem_residual_closed(engine, delta, cap_c, log_det_zeta(engine, 0.1).log_det);
}

double decay_residual(const HeatTraceEngine& engine, double delta, double kappa, double log_det) {
  if (!engine.surface().is_closed()) throw InvalidArgument("decay_residual: surface is not closed");
  if (!(kappa > 0.0)) throw InvalidArgument("decay_residual: kappa must be positive");
  const double lhs = loop_mass(engine, 4.0 * delta, kInfinity, kappa).value;
  return lhs - (expansion_closed_core(engine.coefficients(), delta, log_det) - std::log(kappa));
}

double decay_residual(const ModelSurface& surface, double delta, double kappa) {
  const HeatTraceEngine engine = engine_for(surface, delta);
  return decay_residual(engine, delta, kappa, log_det_zeta(engine, 0.1).log_det);
}

ZetaValue zeta_from_weighted_loops(const HeatTraceEngine& engine, double s) {
  if (engine.surface().is_closed()) throw InvalidArgument("zeta_from_weighted_loops: surface needs a boundary");
  if (!(s > 1.0)) throw InvalidArgument("zeta_from_weighted_loops: need s > 1");
  const HeatCoefficients c = engine.coefficients();
  const double norm = std::pow(2.0, s) / (std::pow(4.0, s) * boost::math::tgamma(s));
  auto weight = [&](double u) { return norm * std::pow(u, s - 1.0); };
  constexpr double kSplit = 0.2;

  // Small loops: tr(e^{-u Delta/2}) = 2a/u + b sqrt(2/u) + c + R(u/2).
  const double analytic = norm * (2.0 * c.a * std::pow(kSplit, s - 1.0) / (s - 1.0) +
                                  c.b * std::sqrt(2.0) * std::pow(kSplit, s - 0.5) / (s - 0.5) +
                                  c.c * std::pow(kSplit, s) / s);
  auto small = [&](double u) { return weight(u) * engine.remainder(u / 2.0); };
  const double u_fit = std::min(kSplit, 2.0 * std::max(engine.t_min(), 1e-12));
  Integral result = integrate_geometric(small, 1e-12, u_fit);
  if (kSplit > u_fit) result += integrate_geometric(small, u_fit, kSplit, 2.0, 1e-13, 2);
  result.value += analytic;

  // Large loops.
  auto large = [&](double u) { return weight(u) * engine.excess(u / 2.0); };
  double bound = 0.0;
  const double upper = spectral_cutoff(engine, kSplit, s, bound);
  result += integrate_geometric(large, kSplit, upper);
  result.error += norm * bound;
  return {result.value, result.error};
}

double zeta_from_weighted_loops(const ModelSurface& surface, double s) {
  const HeatTraceEngine engine(surface);
  return zeta_from_weighted_loops(engine, s).value;
}

}  // namespace loopzeta
