#include "loopzeta/heat_trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/stats.hpp"

namespace loopzeta {

namespace {

// sum_{k >= 1} e^{-k^2 x} for x > 0.
double gauss_tail(double x) {
  double sum = 0.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-x * k * k);
    sum += term;
    if (term <= 1e-18 * sum || term == 0.0) break;
  }
  return sum;
}

// sum_{n >= 1} e^{-t (n pi / L)^2}
double dirichlet_sum(double length, double t) {
  if (t >= kPoissonCrossover) return gauss_tail(t * kPi * kPi / (length * length));
  const double amp = length / (2.0 * std::sqrt(kPi * t));
  return amp * (1.0 + 2.0 * gauss_tail(length * length / t)) - 0.5;
}

// sum_{m in Z} e^{-t (2 pi m / a)^2} - 1
double periodic_excess(double a, double t) {
  if (t >= kPoissonCrossover) return 2.0 * gauss_tail(4.0 * kPi * kPi * t / (a * a));
  const double amp = a / (2.0 * std::sqrt(kPi * t));
  return amp * (1.0 + 2.0 * gauss_tail(a * a / (4.0 * t))) - 1.0;
}

double sphere_sum(double radius, double t, long long first) {
  const double cutoff = heat_trace_cutoff(ModelSurface(RoundSphere{radius}), t);
  CompensatedSum sum;
  for (long long l = first;; ++l) {
    const double lambda = static_cast<double>(l * (l + 1)) / (radius * radius);
    if (lambda > cutoff) break;
    sum.add(static_cast<double>(2 * l + 1) * std::exp(-t * lambda));
  }
  return sum.value();
}

std::shared_ptr<const std::vector<EigenPair>> disk_spectrum(double radius, double cutoff) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const std::vector<EigenPair>>> cache;
  const std::lock_guard lock(mutex);
  auto it = cache.find(radius);
  if (it != cache.end() && !it->second->empty() &&
      it->second->back().value >= cutoff * (1.0 - 1e-12)) {
    return it->second;
  }
  // Enumerate a little past the request so nearby t_min values share one spectrum.
  auto stream = eigenvalues(ModelSurface(DiskDirichlet{radius}), cutoff * 1.05);
  auto spectrum = std::make_shared<const std::vector<EigenPair>>(std::move(stream.pairs));
  cache[radius] = spectrum;
  return spectrum;
}

double smallest_lattice_length(const ModelSurface& surface) {
  switch (surface.kind()) {
    case SurfaceKind::Interval:
      return std::get<IntervalDirichlet>(surface.variant()).length;
    case SurfaceKind::Rectangle: {
      const auto& r = std::get<RectangleDirichlet>(surface.variant());
      return std::min(r.a, r.b);
    }
    case SurfaceKind::Torus: {
      const auto& r = std::get<FlatTorus>(surface.variant());
      return 0.5 * std::min(r.a, r.b);
    }
    default:
      return 0.0;
  }
}

bool is_lattice(const ModelSurface& surface) {
  return surface.kind() == SurfaceKind::Interval || surface.kind() == SurfaceKind::Rectangle ||
         surface.kind() == SurfaceKind::Torus;
}

}  // namespace

double heat_trace_tail_bound(const ModelSurface& surface, double cutoff, double t) {
  return std::exp(-t * cutoff) * weyl_count_upper(surface, cutoff + 1.0 / t);
}

double heat_trace_cutoff(const ModelSurface& surface, double t, double tolerance) {
  if (!(t > 0.0)) throw InvalidArgument("heat trace: t must be positive");
  for (double x = 1.0; x < 2000.0; x += 1.0) {
    if (heat_trace_tail_bound(surface, x / t, t) < tolerance) return x / t;
  }
  throw NumericalError("heat trace: no cutoff reaches the requested tail bound");
}

double heat_trace_eigen_sum(const ModelSurface& surface, double t) {
  const EigenStream stream = eigenvalues(surface, heat_trace_cutoff(surface, t));
  CompensatedSum sum;
  for (const EigenPair& p : stream.pairs) sum.add(static_cast<double>(p.multiplicity) * std::exp(-t * p.value));
  return sum.value();
}

double heat_trace_poisson(const ModelSurface& surface, double t) {
  if (!(t > 0.0)) throw InvalidArgument("heat trace: t must be positive");
  auto interval = [t](double length) {
    const double amp = length / (2.0 * std::sqrt(kPi * t));
    return amp * (1.0 + 2.0 * gauss_tail(length * length / t)) - 0.5;
  };
  auto circle = [t](double a) {
    const double amp = a / (2.0 * std::sqrt(kPi * t));
    return amp * (1.0 + 2.0 * gauss_tail(a * a / (4.0 * t)));
  };
  switch (surface.kind()) {
    case SurfaceKind::Interval:
      return interval(std::get<IntervalDirichlet>(surface.variant()).length);
    case SurfaceKind::Rectangle: {
      const auto& r = std::get<RectangleDirichlet>(surface.variant());
      return interval(r.a) * interval(r.b);
    }
    case SurfaceKind::Torus: {
      const auto& r = std::get<FlatTorus>(surface.variant());
      return circle(r.a) * circle(r.b);
    }
    default:
      throw InvalidArgument("heat_trace_poisson: only interval, rectangle and torus have theta duals");
  }
}

double HeatTraceEngine::Fit::evaluate(double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < powers.size(); ++j) v += coefs[j] * std::pow(t, powers[j]);
  return v;
}

double HeatTraceEngine::Fit::head(double upper, double s) const {
  double v = 0.0;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    const double p = s + powers[j];
    if (!(p > 0.0)) throw InvalidArgument("head integral: exponent makes the integral divergent at 0");
    v += coefs[j] * std::pow(upper, p) / p;
  }
  return v;
}

double HeatTraceEngine::default_t_min(const ModelSurface& surface) {
  switch (surface.kind()) {
    case SurfaceKind::Disk: {
      const double r = std::get<DiskDirichlet>(surface.variant()).radius;
      return 2e-5 * r * r;
    }
    case SurfaceKind::Sphere: {
      const double r = std::get<RoundSphere>(surface.variant()).radius;
      return 1e-4 * r * r;
    }
    default:
      return 0.0;
  }
}

HeatTraceEngine::HeatTraceEngine(const ModelSurface& surface, double t_min)
    : surface_(surface), coef_(surface.heat_coefficients()) {
  if (is_lattice(surface_)) return;
  t_min_ = t_min > 0.0 ? t_min : default_t_min(surface_);
  if (surface_.kind() == SurfaceKind::Disk) {
    const double r = std::get<DiskDirichlet>(surface_.variant()).radius;
    spectrum_ = disk_spectrum(r, heat_trace_cutoff(surface_, t_min_));
  }
  fit_ = fit_remainder(5);
  coarse_fit_ = fit_remainder(4);
}

HeatTraceEngine::Fit HeatTraceEngine::fit_remainder(int terms) const {
  const bool boundary = surface_.has_boundary();
  const double p0 = boundary ? 0.5 : 1.0;
  const double step = boundary ? 0.5 : 1.0;
  constexpr int kSamples = 40;
  constexpr double kSpan = 40.0;
  Eigen::MatrixXd design(kSamples, terms);
  Eigen::VectorXd rhs(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double t = t_min_ * std::pow(kSpan, static_cast<double>(i) / (kSamples - 1));
    const double scale = std::pow(t, -p0);
    for (int j = 0; j < terms; ++j) design(i, j) = std::pow(t, p0 + step * j) * scale;
    rhs[i] = (trace(t) - coef_.a / t - coef_.b / std::sqrt(t) - coef_.c) * scale;
  }
  const Eigen::VectorXd solution = design.colPivHouseholderQr().solve(rhs);
  Fit fit;
  for (int j = 0; j < terms; ++j) {
    fit.powers.push_back(p0 + step * j);
    fit.coefs.push_back(solution[j]);
  }
  return fit;
}

double HeatTraceEngine::trace(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("heat trace: t must be positive");
  switch (surface_.kind()) {
    case SurfaceKind::Interval:
      return dirichlet_sum(std::get<IntervalDirichlet>(surface_.variant()).length, t);
    case SurfaceKind::Rectangle: {
      const auto& r = std::get<RectangleDirichlet>(surface_.variant());
      return dirichlet_sum(r.a, t) * dirichlet_sum(r.b, t);
    }
    case SurfaceKind::Torus:
      return 1.0 + excess(t);
    case SurfaceKind::Sphere:
      if (t < t_min_ * (1.0 - 1e-12)) throw InvalidArgument("heat trace: t below the resolved range of the engine");
      return sphere_sum(std::get<RoundSphere>(surface_.variant()).radius, t, 0);
    case SurfaceKind::Disk: {
      if (t < t_min_ * (1.0 - 1e-12)) throw InvalidArgument("heat trace: t below the resolved range of the engine");
      const double cutoff = heat_trace_cutoff(surface_, t);
      CompensatedSum sum;
      for (const EigenPair& p : *spectrum_) {
        if (p.value > cutoff) break;
        sum.add(static_cast<double>(p.multiplicity) * std::exp(-t * p.value));
      }
      return sum.value();
    }
  }
  return 0.0;
}

double HeatTraceEngine::excess(double t) const {
  switch (surface_.kind()) {
    case SurfaceKind::Torus: {
      const auto& r = std::get<FlatTorus>(surface_.variant());
      const double ea = periodic_excess(r.a, t);
      const double eb = periodic_excess(r.b, t);
      return ea + eb + ea * eb;
    }
    case SurfaceKind::Sphere:
      if (t < t_min_ * (1.0 - 1e-12)) throw InvalidArgument("heat trace: t below the resolved range of the engine");
      return sphere_sum(std::get<RoundSphere>(surface_.variant()).radius, t, 1);
    default:
      return trace(t);
  }
}

double HeatTraceEngine::remainder(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("heat trace: t must be positive");
  switch (surface_.kind()) {
    case SurfaceKind::Interval: {
      const double length = std::get<IntervalDirichlet>(surface_.variant()).length;
      return length / (2.0 * std::sqrt(kPi * t)) * 2.0 * gauss_tail(length * length / t);
    }
    case SurfaceKind::Rectangle: {
      const auto& r = std::get<RectangleDirichlet>(surface_.variant());
      const double aa = r.a / (2.0 * std::sqrt(kPi * t));
      const double ab = r.b / (2.0 * std::sqrt(kPi * t));
      const double ea = gauss_tail(r.a * r.a / t);
      const double eb = gauss_tail(r.b * r.b / t);
      return aa * ab * (2.0 * ea + 2.0 * eb + 4.0 * ea * eb) - aa * ea - ab * eb;
    }
    case SurfaceKind::Torus: {
      const auto& r = std::get<FlatTorus>(surface_.variant());
      const double ea = gauss_tail(r.a * r.a / (4.0 * t));
      const double eb = gauss_tail(r.b * r.b / (4.0 * t));
      return r.a * r.b / (4.0 * kPi * t) * (2.0 * ea + 2.0 * eb + 4.0 * ea * eb);
    }
    default:
      if (t < t_min_) return fit_.evaluate(t);
      return trace(t) - coef_.a / t - coef_.b / std::sqrt(t) - coef_.c;
  }
}

Integral HeatTraceEngine::head_integral(double delta, double s) const {
  if (!(delta > 0.0)) throw InvalidArgument("head integral: delta must be positive");
  auto integrand = [this, s](double t) { return std::pow(t, s - 1.0) * remainder(t); };
  if (is_lattice(surface_)) {
    // R(t) is O(t^{-1} e^{-l^2/t}) with l the shortest period; below l^2/80 it underflows the target.
    const double l = smallest_lattice_length(surface_);
    const double lower = l * l / 80.0;
    if (delta <= lower) return {};
    return integrate_geometric(integrand, lower, delta);
  }
  const double fitted_upper = std::min(delta, t_min_);
  const double fitted = fit_.head(fitted_upper, s);
  Integral result{fitted, std::abs(fitted - coarse_fit_.head(fitted_upper, s))};
  // The remainder carries the rounding noise of tr - a/t; GK31 on a ratio-2
  // panel is already exact for the smooth part, so refinement stays shallow.
  if (delta > t_min_) result += integrate_geometric(integrand, t_min_, delta, 2.0, 1e-13, 2);
  return result;
}

double HeatTraceEngine::resolved_cutoff() const {
  if (spectrum_) return spectrum_->empty() ? 0.0 : spectrum_->back().value;
  if (t_min_ > 0.0) return heat_trace_cutoff(surface_, t_min_);
  return std::numeric_limits<double>::infinity();
}

double heat_trace(const ModelSurface& surface, double t) {
  if (!(t > 0.0)) throw InvalidArgument("heat trace: t must be positive");
  const double floor = HeatTraceEngine::default_t_min(surface);
  const HeatTraceEngine engine(surface, floor > 0.0 ? std::min(floor, t) : 0.0);
  return engine.trace(t);
}

double short_time_prediction(const ModelSurface& surface, double t) {
  if (!(t > 0.0)) throw InvalidArgument("short-time prediction: t must be positive");
  const HeatCoefficients c = surface.heat_coefficients();
  return c.a / t + c.b / std::sqrt(t) + c.c;
}

}  // namespace loopzeta
