#pragma once

#include <limits>

#include "loopzeta/heat_trace.hpp"
#include "loopzeta/quadrature.hpp"
#include "loopzeta/zeta_det.hpp"

namespace loopzeta {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Brownian loops on `surface` with quadratic variation in (qv_low, qv_high),
/// penalized by e^{-kappa QV/4}.
struct LoopMassQuery {
  ModelSurface surface;
  double qv_low = 0.0;
  double qv_high = kInfinity;
  double kappa = 0.0;
};

/// int_{qv_low/2}^{qv_high/2} u^{-1} e^{-kappa u/2} tr(e^{-u Delta/2}) du.
///
/// The zero-mode part of closed surfaces is integrated in closed form
/// (exponential integrals); an infinite upper limit is closed with the
/// spectral-gap bound. `panel_ratio` sets the geometric panel width.
/// Throws InvalidArgument for the divergent closed, kappa = 0, qv_high = inf query.
Integral loop_mass(const HeatTraceEngine& engine, double qv_low, double qv_high, double kappa = 0.0,
                   double panel_ratio = 2.0);
double loop_mass(const LoopMassQuery& query);

/// The same window after t = u/2: int_{qv_low/4}^{qv_high/4} t^{-1} e^{-kappa t} tr(e^{-t Delta}) dt.
Integral loop_mass_t_form(const HeatTraceEngine& engine, double qv_low, double qv_high, double kappa = 0.0);

/// M(4 delta, inf) - [Vol/(4 pi delta) - Len/(4 sqrt(pi delta)) - c (log delta + gamma) - log det],
/// with (a, b, c) from the heat coefficients (c = 1/4 for the rectangle).
double theorem_residual_boundary(const HeatTraceEngine& engine, double delta, double log_det);
double theorem_residual_boundary(const ModelSurface& surface, double delta);

/// M(4 delta, 4C) - [Vol/(4 pi delta) - c (log delta + gamma) + log C + gamma - log det'].
double theorem_residual_closed(const HeatTraceEngine& engine, double delta, double cap_c, double log_det);
double theorem_residual_closed(const ModelSurface& surface, double delta, double cap_c);

/// M_kappa(4 delta, inf) - [Vol/(4 pi delta) - c (log delta + gamma) - log kappa - log det'].
double decay_residual(const HeatTraceEngine& engine, double delta, double kappa, double log_det);
double decay_residual(const ModelSurface& surface, double delta, double kappa);

/// int_0^inf (2u)^s / (4^s Gamma(s)) u^{-1} tr(e^{-u Delta/2}) du for a surface
/// with boundary and s > 1, i.e. loops weighted by QV^s. The small-u end is
/// integrated after subtracting a/t + b/sqrt(t) + c, whose part is exact.
ZetaValue zeta_from_weighted_loops(const HeatTraceEngine& engine, double s);
double zeta_from_weighted_loops(const ModelSurface& surface, double s);

}  // namespace loopzeta
