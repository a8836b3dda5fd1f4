#include "loopzeta/lattice_bridge.hpp"

#include <cmath>
#include <string>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/stats.hpp"

namespace loopzeta {

namespace {

// 4 sin^2(pi j / n), the eigenvalues of the n-cycle Laplacian.
std::vector<double> cycle_spectrum(int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double s = std::sin(kPi * j / n);
    out[static_cast<std::size_t>(j)] = 4.0 * s * s;
  }
  return out;
}

}  // namespace

void TorusLatticeSpec::validate() const {
  if (n_x < 4 || n_y < 4) {
    throw InvalidArgument("lattice torus needs n_x, n_y >= 4 (got " + std::to_string(n_x) + "x" +
                          std::to_string(n_y) + ")");
  }
}

double torus_log_det_prime(int n_x, int n_y) {
  if (n_x < 1 || n_y < 1) throw InvalidArgument("lattice torus sizes must be positive");
  const auto ex = cycle_spectrum(n_x);
  const auto ey = cycle_spectrum(n_y);
  CompensatedSum total;
  for (std::size_t j = 0; j < ex.size(); ++j) {
    CompensatedSum row;
    for (std::size_t k = 0; k < ey.size(); ++k) {
      if (j == 0 && k == 0) continue;
      row.add(std::log(ex[j] + ey[k]));
    }
    total.add(row.value());
  }
  return total.value();
}

double discrete_torus_log_det(const TorusLatticeSpec& spec) {
  spec.validate();
  return torus_log_det_prime(spec.n_x, spec.n_y);
}

double lattice_constant(const TorusLatticeSpec& spec) {
  const double sites = static_cast<double>(spec.n_x) * spec.n_y;
  return discrete_torus_log_det(spec) - 4.0 * kCatalan / kPi * sites - std::log(sites);
}

ConstantTermReport constant_term(std::span<const TorusLatticeSpec> sizes) {
  if (sizes.size() < 4) throw InvalidArgument("constant_term needs at least 4 lattice sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sizes[i].validate();
    if (i > 0 && (sizes[i].n_x != 2 * sizes[i - 1].n_x || sizes[i].n_y != 2 * sizes[i - 1].n_y)) {
      throw InvalidArgument("constant_term needs each lattice twice the previous one");
    }
  }
  ConstantTermReport report;
  report.sizes.assign(sizes.begin(), sizes.end());
  for (const auto& s : sizes) {
    report.log_dets.push_back(discrete_torus_log_det(s));
    const double sites = static_cast<double>(s.n_x) * s.n_y;
    report.constants.push_back(report.log_dets.back() - 4.0 * kCatalan / kPi * sites - std::log(sites));
  }
  const auto& c = report.constants;
  report.limit = richardson_extrapolate(c, 2.0, 2.0, 2.0);
  report.cauchy_gap = std::abs(c[c.size() - 1] - c[c.size() - 2]);
  report.flagged = report.cauchy_gap > 1e-2;
  return report;
}

std::vector<TorusLatticeSpec> doubling_sequence(int first_n, int aspect, int count) {
  if (first_n < 1 || aspect < 1 || count < 1) throw InvalidArgument("doubling_sequence: bad arguments");
  std::vector<TorusLatticeSpec> out;
  int n = first_n;
  for (int i = 0; i < count; ++i, n *= 2) out.push_back({n, aspect * n});
  return out;
}

}  // namespace loopzeta
