#include "loopzeta/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"

namespace loopzeta {

namespace {

std::uint64_t partition_hash(const DyadicPartition& p) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (const auto& s : p.squares) {
    mix(static_cast<std::uint64_t>(s.level));
    mix(static_cast<std::uint64_t>(s.i));
    mix(static_cast<std::uint64_t>(s.j));
  }
  return h;
}

std::vector<double> level_histogram(const DyadicPartition& p) {
  std::vector<double> out(static_cast<std::size_t>(p.depth_cap) + 1, 0.0);
  for (const auto& s : p.squares) out[static_cast<std::size_t>(s.level)] += 1.0;
  return out;
}

ReweightSample describe(const DyadicPartition& p) {
  ReweightSample out;
  out.square_count = static_cast<int>(p.squares.size());
  out.level_counts = level_histogram(p);
  out.partition_hash = partition_hash(p);
  return out;
}

constexpr std::uint64_t kCalibrationStream = std::uint64_t{1} << 40;

}  // namespace

std::vector<double> average_weights(int level, const DyadicSquare& square) {
  square.validate();
  if (square.level > level) throw NumericalError("resolution exhausted");
  const int n = 1 << level;
  const int m = n - 1;
  const int span = 1 << (level - square.level);
  const int c0 = static_cast<int>(square.i) * span;
  const int r0 = static_cast<int>(square.j) * span;
  const double share = 0.25 / (static_cast<double>(span) * span);
  std::vector<double> w(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  for (int r = r0; r < r0 + span; ++r) {
    for (int c = c0; c < c0 + span; ++c) {
      for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
          const int vr = r + dr;
          const int vc = c + dc;
          if (vr < 1 || vc < 1 || vr >= n || vc >= n) continue;
          w[static_cast<std::size_t>(vr - 1) * m + static_cast<std::size_t>(vc - 1)] += share;
        }
      }
    }
  }
  return w;
}

Matrix average_covariance(int level, std::span<const DyadicSquare> squares) {
  const auto n = static_cast<Eigen::Index>(squares.size());
  std::vector<std::vector<double>> w, u;
  for (const auto& s : squares) {
    w.push_back(average_weights(level, s));
    u.push_back(solve_dirichlet_laplacian(1 << level, w.back()));
  }
  Matrix k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      double dot = 0.0;
      const auto& wa = w[static_cast<std::size_t>(a)];
      const auto& ub = u[static_cast<std::size_t>(b)];
      for (std::size_t t = 0; t < wa.size(); ++t) dot += wa[t] * ub[t];
      k(a, b) = GridField::normalization() * dot;
    }
  }
  return 0.5 * (k + k.transpose());
}

ProjectionResult project_onto_partition(const GridField& field, const DyadicPartition& partition, double Q) {
  if (!(Q > 0.0)) throw InvalidArgument("projection needs Q > 0");
  const auto& squares = partition.squares;
  if (squares.empty()) throw InvalidArgument("projection onto an empty partition");
  const int level = field.level();
  const auto n = static_cast<Eigen::Index>(squares.size());
  const std::size_t m = static_cast<std::size_t>((1 << level) - 1) * static_cast<std::size_t>((1 << level) - 1);

  Matrix w(static_cast<Eigen::Index>(m), n);
  Matrix u(static_cast<Eigen::Index>(m), n);
  Vector means(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& sq = squares[static_cast<std::size_t>(s)];
    means[s] = square_average(field, sq);
    const auto ws = average_weights(level, sq);
    const auto us = solve_dirichlet_laplacian(1 << level, ws);
    w.col(s) = Eigen::Map<const Vector>(ws.data(), static_cast<Eigen::Index>(m));
    u.col(s) = Eigen::Map<const Vector>(us.data(), static_cast<Eigen::Index>(m));
  }
  // Lagrange system: h^P = L^-1 W mu with (W^T L^-1 W) mu = means.
  Matrix schur = w.transpose() * u;
  schur = 0.5 * (schur + schur.transpose());
  const Eigen::LLT<Matrix> llt(schur);
  if (llt.info() != Eigen::Success) throw NumericalError("singular Schur complement in projection");
  const Vector mu = llt.solve(means);
  const Vector hp = u * mu;

  ProjectionResult out{GridField::from_interior(level, std::span<const double>(hp.data(), m), field.seed()),
                       std::vector<double>(means.data(), means.data() + n), 0.0, 0.0};
  out.coefficient_energy = means.dot(mu) / GridField::normalization() / (Q * Q);
  for (Eigen::Index s = 0; s < n; ++s) {
    const double got = square_average(out.projected_field, squares[static_cast<std::size_t>(s)]);
    out.solver_residual = std::max(out.solver_residual, std::abs(got - means[s]));
  }
  return out;
}

double det_weight(double coefficient_energy, double c_prime) { return c_prime / 12.0 * coefficient_energy; }

WeightReport weight_report(double c, double c_prime, double coefficient_energy) {
  WeightReport r;
  r.c = c;
  r.c_prime = c_prime;
  r.c_new = c + c_prime;
  r.Q = charge_to_params(c).Q;
  r.Q_new = charge_to_params(r.c_new).Q;
  r.log_weight = det_weight(coefficient_energy, c_prime);
  return r;
}

double log_coefficient_density(double Q, std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double dim = static_cast<double>(x.size());
  return dim * (std::log(Q) - 0.5 * std::log(2.0 * kPi)) - 0.5 * Q * Q * sq;
}

double density_ratio_check(double c, double c_prime, std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double q = charge_to_params(c).Q;
  const double q_new = charge_to_params(c + c_prime).Q;
  return det_weight(sq, c_prime) + log_coefficient_density(q, x) - log_coefficient_density(q_new, x);
}

double normalization_constant(const GridField& field, double Q, std::size_t square_count) {
  const int n = field.size();
  CompensatedSum vol;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) vol.add(std::exp(2.0 * field.cell(r, c) / Q));
  }
  const double area = vol.value() / (static_cast<double>(n) * n);
  return 0.25 * std::log(static_cast<double>(square_count)) - 0.75 * std::log(area);
}

double calibrate_epsilon(int grid_size, double c, double target, std::size_t samples, std::uint64_t seed,
                         const ParallelFor& parallel) {
  if (samples == 0 || !(target >= 1.0)) throw InvalidArgument("calibrate_epsilon: bad target or sample count");
  const double q = charge_to_params(c).Q;
  std::vector<GridField> fields;
  fields.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) fields.push_back(sample_dgff(grid_size, seed, kCalibrationStream + i));
  auto mean_count = [&](double eps) {
    std::vector<double> counts(samples);
    parallel(samples, [&](std::size_t i) {
      counts[i] = static_cast<double>(subdivide_summary(fields[i], q, eps).square_count);
    });
    CompensatedSum total;
    for (double v : counts) total.add(v);
    return total.value() / static_cast<double>(samples);
  };
  // The count is non-increasing in epsilon for every field.
  double lo = std::log(1e-6), hi = std::log(1e3);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_count(std::exp(mid)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

ReweightStats reweighting_experiment(const ReweightConfig& config, const ParallelFor& parallel) {
  if (config.c > 1.0 || config.c + config.c_prime > 1.0) {
    throw InvalidArgument("reweighting experiment needs c <= 1 and c + c' <= 1");
  }
  if (config.samples < 1000) throw InvalidArgument("reweighting experiment needs at least 1000 samples");
  ReweightStats st;
  st.config = config;
  st.Q = charge_to_params(config.c).Q;
  st.Q_new = charge_to_params(config.c + config.c_prime).Q;
  st.epsilon = config.epsilon > 0.0
                   ? config.epsilon
                   : calibrate_epsilon(config.grid_size, config.c + config.c_prime, config.target_mean_count,
                                       config.calibration_samples, config.seed, parallel);

  const std::size_t n = config.samples;
  st.direct.resize(n);
  st.weighted.resize(n);
  parallel(n, [&](std::size_t i) {
    const GridField field = sample_dgff(config.grid_size, config.seed, 2 * i);
    st.direct[i] = describe(subdivide(field, st.Q_new, st.epsilon));
  });
  parallel(n, [&](std::size_t i) {
    const GridField field = sample_dgff(config.grid_size, config.seed, 2 * i + 1);
    const DyadicPartition p = subdivide(field, st.Q, st.epsilon);
    const ProjectionResult proj = project_onto_partition(field, p, st.Q);
    ReweightSample s = describe(p);
    s.coefficient_energy = proj.coefficient_energy;
    s.log_weight = det_weight(proj.coefficient_energy, config.c_prime) +
                   static_cast<double>(s.square_count) * std::log(st.Q_new / st.Q);
    s.normalization_constant = normalization_constant(proj.projected_field, st.Q, p.squares.size());
    st.weighted[i] = std::move(s);
  });

  double max_log = -INFINITY;
  for (const auto& s : st.weighted) max_log = std::max(max_log, s.log_weight);
  CompensatedSum norm_const;
  for (const auto& s : st.weighted) {
    st.weights.push_back(std::exp(s.log_weight - max_log));
    norm_const.add(s.normalization_constant);
  }
  st.mean_normalization_constant = norm_const.value() / static_cast<double>(n);

  std::vector<int> counts_direct, counts_weighted;
  std::vector<std::vector<double>> levels_direct, levels_weighted;
  for (const auto& s : st.direct) {
    counts_direct.push_back(s.square_count);
    levels_direct.push_back(s.level_counts);
  }
  for (const auto& s : st.weighted) {
    counts_weighted.push_back(s.square_count);
    levels_weighted.push_back(s.level_counts);
  }
  st.count_test = compare_categorical(counts_direct, counts_weighted, st.weights);
  st.level_test = compare_means(levels_direct, levels_weighted, st.weights);
  st.ess = effective_sample_size(st.weights);

  std::map<int, int> freq;
  for (int c : counts_direct) ++freq[c];
  st.modal_count = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
                     return a.second < b.second;
                   })->first;
  std::vector<std::vector<double>> slice_direct, slice_weighted;
  std::vector<double> slice_weights;
  for (const auto& s : st.direct) {
    if (s.square_count == st.modal_count) slice_direct.push_back(s.level_counts);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (st.weighted[i].square_count == st.modal_count) {
      slice_weighted.push_back(st.weighted[i].level_counts);
      slice_weights.push_back(st.weights[i]);
    }
  }
  st.slice_ess = effective_sample_size(slice_weights);
  if (!slice_direct.empty() && !slice_weighted.empty()) {
    st.slice_test = compare_means(slice_direct, slice_weighted, slice_weights);
  }
  st.flagged = st.ess < 50.0 || st.slice_ess < 50.0;
  return st;
}

}  // namespace loopzeta
