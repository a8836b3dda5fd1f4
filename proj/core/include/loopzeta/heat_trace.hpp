#pragma once

#include <memory>
#include <vector>

#include "loopzeta/quadrature.hpp"
#include "loopzeta/surfaces.hpp"

namespace loopzeta {

/// Crossover between Poisson-dual and direct sums for interval, rectangle and torus.
inline constexpr double kPoissonCrossover = 0.05;

/// Absolute accuracy demanded from truncated eigen-sums.
inline constexpr double kTraceTailTolerance = 1e-14;

/// Certified bound on sum_{lambda > cutoff} e^{-t lambda}, obtained by
/// comparing the sum with the Weyl-type upper count: e^{-t Lambda} N(Lambda + 1/t).
double heat_trace_tail_bound(const ModelSurface& surface, double cutoff, double t);

/// Smallest cutoff (of the form x/t) whose tail bound is below `tolerance`.
double heat_trace_cutoff(const ModelSurface& surface, double t, double tolerance = kTraceTailTolerance);

/// tr e^{-t Delta} evaluated from the enumerated spectrum (any surface).
double heat_trace_eigen_sum(const ModelSurface& surface, double t);

/// tr e^{-t Delta} from the theta-function dual sums; interval, rectangle and torus only.
double heat_trace_poisson(const ModelSurface& surface, double t);

/// Evaluator for tr e^{-t Delta} and the short-time remainder
/// R(t) = tr - a/t - b/sqrt(t) - c.
///
/// Interval, rectangle and torus are exact at every t (Poisson duals below
/// the crossover). Sphere and disk are eigen-sums; the disk spectrum is
/// enumerated once down to t_min. Below t_min the remainder of these two comes
/// from a least-squares fit of R on [t_min, 40 t_min] in powers of sqrt(t)
/// (disk) or t (sphere), and head integrals over (0, t_min] use the fit.
class HeatTraceEngine {
 public:
  explicit HeatTraceEngine(const ModelSurface& surface, double t_min = 0.0);

  /// Default resolved range: 2e-5 R^2 for the disk, 1e-4 r^2 for the sphere.
  static double default_t_min(const ModelSurface& surface);

  const ModelSurface& surface() const { return surface_; }
  const HeatCoefficients& coefficients() const { return coef_; }
  double t_min() const { return t_min_; }

  /// tr e^{-t Delta}, zero modes included. Throws for t < t_min on sphere/disk.
  double trace(double t) const;
  /// tr e^{-t Delta} - n, evaluated without cancellation at large t.
  double excess(double t) const;
  /// tr - a/t - b/sqrt(t) - c; uses the fit below t_min.
  double remainder(double t) const;

  /// int_0^delta t^{s-1} R(t) dt for s > -1/2 (boundary) or s > -1 (closed).
  Integral head_integral(double delta, double s) const;

  /// Largest eigenvalue the engine can resolve without re-enumeration.
  double resolved_cutoff() const;

  /// Pre-enumerated spectrum (disk only, otherwise null).
  const std::vector<EigenPair>* spectrum() const { return spectrum_.get(); }

 private:
  struct Fit {
    std::vector<double> powers;
    std::vector<double> coefs;
    double evaluate(double t) const;
    double head(double upper, double s) const;
  };

  Fit fit_remainder(int terms) const;

  ModelSurface surface_;
  HeatCoefficients coef_;
  double t_min_ = 0.0;
  std::shared_ptr<const std::vector<EigenPair>> spectrum_;  // disk only
  Fit fit_;
  Fit coarse_fit_;
};

/// One-shot tr e^{-t Delta} (builds an engine resolved down to t).
double heat_trace(const ModelSurface& surface, double t);

/// a/t + b/sqrt(t) + c from the surface's heat coefficients.
double short_time_prediction(const ModelSurface& surface, double t);

}  // namespace loopzeta
