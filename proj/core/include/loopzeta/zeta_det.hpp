#pragma once

#include "loopzeta/heat_trace.hpp"
#include "loopzeta/surfaces.hpp"

namespace loopzeta {

struct ZetaValue {
  double value = 0.0;
  double error = 0.0;
};

/// Spectral zeta function from the eigenvalues: a smoothly cut-off partial sum
/// sum lambda^{-s} chi(lambda / Lambda) plus the Weyl-law integral of the
/// complement. The error is the change when Lambda is halved. Requires s > 1.
ZetaValue zeta_eigen_sum(const HeatTraceEngine& engine, double s);

/// Mellin representation continued by splitting at delta:
/// Gamma(s)^{-1} [ int_delta^inf t^{s-1}(tr - n) + int_0^delta t^{s-1} R
///                 + a delta^{s-1}/(s-1) + b delta^{s-1/2}/(s-1/2) + (c-n) delta^s/s ].
/// Valid for every real s away from the poles 1 and 1/2.
ZetaValue zeta_mellin(const HeatTraceEngine& engine, double s, double delta = 0.1);

/// Sum of lambda^{-s} over the non-zero spectrum. Throws InvalidArgument
/// ("outside series domain; use log_det path") for s <= 1 + 1e-3.
double zeta(const ModelSurface& surface, double s);

struct ZetaDetReport {
  double log_det = 0.0;          // -zeta'(0)
  double delta_split = 0.0;
  double integral_tail = 0.0;    // int_delta^inf t^{-1}(tr - n) dt
  double integral_head = 0.0;    // int_0^delta t^{-1} R(t) dt
  double correction_terms = 0.0; // -a/delta - 2b/sqrt(delta) + (c - n)(log delta + gamma)
  double error_estimate = 0.0;
  bool flagged = false;          // error_estimate > 1e-6
};

/// log det_zeta = -zeta'(0) with
/// zeta'(0) = integral_tail + integral_head + correction_terms.
/// For closed surfaces this is log det' (zero mode removed).
/// delta must lie in [1e-5, 0.5].
ZetaDetReport log_det_zeta(const HeatTraceEngine& engine, double delta);
ZetaDetReport log_det_zeta(const ModelSurface& surface, double delta);

/// zeta(0) = c - n, read off the heat coefficients.
double zeta_at_zero(const ModelSurface& surface);

/// Richardson limit of the continued zeta along s = 0.1, 0.05, 0.025, 0.0125, 0.00625.
double zeta_at_zero_numeric(const HeatTraceEngine& engine, double delta = 0.1);

/// log det under the constant conformal change g = e^{2 sigma} g0:
/// closed: -sigma chi/3 + 2 sigma + log_det_g0; disk: -sigma chi/3 + log_det_g0.
/// Rectangles (and the interval) throw: their corners violate the smooth-boundary hypothesis.
double polyakov_alvarez(const ModelSurface& surface_g0, double sigma, double log_det_g0);

}  // namespace loopzeta
