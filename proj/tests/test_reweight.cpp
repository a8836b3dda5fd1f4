#include <gtest/gtest.h>

#include <cmath>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/random.hpp"
#include "loopzeta/reweight.hpp"

using namespace loopzeta;

namespace {

DyadicPartition partition_of(std::vector<DyadicSquare> squares) {
  DyadicPartition p;
  std::sort(squares.begin(), squares.end());
  p.squares = std::move(squares);
  p.flagged.assign(p.squares.size(), false);
  p.depth_cap = 0;
  for (const auto& s : p.squares) p.depth_cap = std::max(p.depth_cap, s.level);
  return p;
}

GridField combine(double a, const GridField& f, double b, const GridField& g) {
  auto v = f.vertex_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * v[i] + b * g.vertex_values()[i];
  return GridField(f.level(), v);
}

// Square average as an explicit linear functional on interior vertices:
// every cell spreads 1/4 to each of its corners.
Vector average_functional(int level, const DyadicSquare& s) {
  const int n = 1 << level, m = n - 1;
  const int cells = n >> s.level;
  Vector w = Vector::Zero(m * m);
  for (int r = static_cast<int>(s.j) * cells; r < static_cast<int>(s.j + 1) * cells; ++r) {
    for (int c = static_cast<int>(s.i) * cells; c < static_cast<int>(s.i + 1) * cells; ++c) {
      for (auto [dr, dc] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
        const int vr = r + dr, vc = c + dc;
        if (vr == 0 || vc == 0 || vr == n || vc == n) continue;
        w((vr - 1) * m + (vc - 1)) += 0.25 / (double(cells) * cells);
      }
    }
  }
  return w;
}

}  // namespace

TEST(DetWeight, Arithmetic) {
  EXPECT_EQ(det_weight(7.3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(det_weight(12.0, 1.0), 1.0);
  for (double e : {0.5, 3.0, 40.0}) EXPECT_NEAR(det_weight(e, -2.0) + det_weight(e, 5.0), det_weight(e, 3.0), 1e-14);
}

TEST(DetWeight, CombinesWithBaseDensity) {
  for (double c : {0.0, -12.5, 0.9}) {
    for (double cp : {-3.0, 1.0}) {
      const double q = std::sqrt((25.0 - c) / 6.0);
      for (double x : {0.3, -1.2, 2.0}) {
        const double lhs = det_weight(x * x, cp) - q * q * x * x / 2;
        EXPECT_NEAR(lhs, (cp / 6 - q * q) * x * x / 2, 1e-13);
      }
    }
  }
}

TEST(WeightReport, BackgroundChargeShift) {
  for (double c : {-20.0, -1.0, 0.0, 1.0, 10.0}) {
    for (double cp : {-12.5, -2.0, 0.0, 3.0, 14.0}) {
      if (c + cp >= 25.0) continue;
      const WeightReport r = weight_report(c, cp, 2.0);
      EXPECT_NEAR(r.Q_new * r.Q_new, r.Q * r.Q - cp / 6.0, 1e-12);
      EXPECT_EQ(r.c_new, c + cp);
      EXPECT_EQ(r.log_weight, det_weight(2.0, cp));
    }
  }
}

TEST(DensityRatio, ConstantInTheCoefficients) {
  const std::pair<double, double> charges[] = {{0.0, -2.0}, {0.0, 19.0}, {-12.5, 30.0}, {1.0, 23.0}, {-5.0, -10.0}};
  for (auto [c, cp] : charges) {
    RandomStream rng(1515, 0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> x(10);
      for (auto& v : x) v = 3.0 * rng.normal();
      const double r = density_ratio_check(c, cp, x);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_LT(hi - lo, 1e-10) << c << " " << cp;
  }
  std::vector<double> x{0.1, -2.0, 4.0};
  EXPECT_NEAR(density_ratio_check(0.0, 0.0, x), 0.0, 1e-15);
}

TEST(DensityRatio, DirectDensityEvaluation) {
  // log N(0, Q^-2) density written out by hand.
  const std::vector<double> x{0.2, -0.7, 1.1};
  const double q = 2.5;
  double expected = 0.0;
  for (double v : x) expected += std::log(q) - 0.5 * std::log(2 * kPi) - q * q * v * v / 2;
  EXPECT_NEAR(log_coefficient_density(q, x), expected, 1e-13);
}

TEST(Projection, SingleSquareIsIdempotent) {
  const GridField f = sample_dgff(32, 4);
  const DyadicPartition root = partition_of({{0, 0, 0}});
  const ProjectionResult once = project_onto_partition(f, root, 2.0);
  const ProjectionResult twice = project_onto_partition(once.projected_field, root, 2.0);
  for (std::size_t i = 0; i < once.projected_field.vertex_values().size(); ++i) {
    EXPECT_NEAR(once.projected_field.vertex_values()[i], twice.projected_field.vertex_values()[i], 1e-10);
  }
  EXPECT_NEAR(square_average(once.projected_field, {}), square_average(f, {}), 1e-9);
}

TEST(Projection, PreservesSquareMeansAndEnergy) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GridField f = sample_dgff(64, seed);
    const double q = 2.0;
    const DyadicPartition p = subdivide(f, q, 0.05 * quantum_size(f, q, {}));
    const ProjectionResult r = project_onto_partition(f, p, q);
    EXPECT_LT(r.solver_residual, 1e-9);
    for (std::size_t k = 0; k < p.squares.size(); ++k) {
      EXPECT_NEAR(square_average(r.projected_field, p.squares[k]), square_average(f, p.squares[k]), 1e-9);
      EXPECT_NEAR(r.square_means[k], square_average(f, p.squares[k]), 1e-12);
    }
    EXPECT_GE(r.coefficient_energy, 0.0);
    EXPECT_NEAR(r.coefficient_energy, r.projected_field.dirichlet_energy() / (q * q), 1e-9 * r.coefficient_energy);
  }
}

TEST(Projection, Pythagoras) {
  const GridField f = sample_dgff(64, 17);
  const DyadicPartition p = subdivide(f, 2.0, 0.03 * quantum_size(f, 2.0, {}));
  const GridField hp = project_onto_partition(f, p, 2.0).projected_field;
  const GridField rest = combine(1.0, f, -1.0, hp);
  const double total = f.dirichlet_energy();
  EXPECT_NEAR(total, hp.dirichlet_energy() + rest.dirichlet_energy(), 1e-8 * total);
}

TEST(Projection, MatchesDenseGramOracle) {
  const int level = 4, n = 16, m = n - 1;
  Matrix l = Matrix::Zero(m * m, m * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const int v = r * m + c;
      l(v, v) = 4.0;
      if (c + 1 < m) l(v, v + 1) = l(v + 1, v) = -1.0;
      if (r + 1 < m) l(v, v + m) = l(v + m, v) = -1.0;
    }
  }
  const Matrix green = 2 * kPi * l.inverse();
  const DyadicPartition p = partition_of({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}});
  Matrix w(m * m, 4);
  for (int k = 0; k < 4; ++k) w.col(k) = average_functional(level, p.squares[k]);
  const Matrix gram = w.transpose() * green * w;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridField f = sample_dgff(n, seed);
    Vector v(4);
    for (int k = 0; k < 4; ++k) v(k) = square_average(f, p.squares[k]);
    const double q = 1.5;
    const double oracle = v.dot(gram.ldlt().solve(v)) / (q * q);
    EXPECT_NEAR(project_onto_partition(f, p, q).coefficient_energy, oracle, 1e-8 * oracle);
  }
  // The library's covariance of square averages is the same Gram matrix.
  const Matrix cov = average_covariance(level, p.squares);
  EXPECT_LT((cov - gram).cwiseAbs().maxCoeff(), 1e-10);
  for (int k = 0; k < 4; ++k) {
    const auto wk = average_weights(level, p.squares[k]);
    for (int i = 0; i < m * m; ++i) ASSERT_NEAR(wk[i], w(i, k), 1e-15);
  }
}

TEST(Projection, Linear) {
  const GridField f = sample_dgff(32, 1), g = sample_dgff(32, 2);
  const DyadicPartition p = subdivide(f, 2.0, 0.3 * quantum_size(f, 2.0, {}));
  // Single cells would make the square averages linearly dependent.
  for (const auto& sq : p.squares) ASSERT_LT(sq.level, f.level());
  const double a = 0.7, b = -1.9;
  const auto pf = project_onto_partition(f, p, 2.0).projected_field.vertex_values();
  const auto pg = project_onto_partition(g, p, 2.0).projected_field.vertex_values();
  const auto pc = project_onto_partition(combine(a, f, b, g), p, 2.0).projected_field.vertex_values();
  for (std::size_t i = 0; i < pc.size(); ++i) EXPECT_NEAR(pc[i], a * pf[i] + b * pg[i], 1e-9);
}

TEST(Projection, DegeneratePartitionIsRejected) {
  const GridField f = sample_dgff(16, 1);
  DyadicPartition p = partition_of({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}});
  p.squares.push_back({1, 1, 1});
  p.flagged.push_back(false);
  EXPECT_THROW(project_onto_partition(f, p, 2.0), NumericalError);
}

TEST(NormalizationConstant, ZeroFieldHasUnitVolume) {
  const GridField zero(4, std::vector<double>(17 * 17, 0.0));
  EXPECT_NEAR(normalization_constant(zero, 2.0, 16), 0.25 * std::log(16.0), 1e-14);
}

TEST(ReweightExperiment, Preconditions) {
  ReweightConfig cfg;
  cfg.samples = 999;
  EXPECT_THROW(reweighting_experiment(cfg), InvalidArgument);
  cfg.samples = 1000;
  cfg.c = 0.5;
  cfg.c_prime = 1.0;
  EXPECT_THROW(reweighting_experiment(cfg), InvalidArgument);
}

TEST(ReweightExperiment, NullShiftAgrees) {
  ReweightConfig cfg;
  cfg.grid_size = 64;
  cfg.c = 0.0;
  cfg.c_prime = 0.0;
  cfg.samples = 1000;
  cfg.seed = 5;
  const ReweightStats st = reweighting_experiment(cfg);
  EXPECT_GT(st.count_test.p_value, 0.01);
  EXPECT_GT(st.level_test.p_value, 0.01);
  EXPECT_NEAR(st.ess, 1000.0, 1e-6);
  for (double w : st.weights) EXPECT_EQ(w, 1.0);
  double mean = 0.0;
  for (const auto& s : st.direct) mean += s.square_count;
  mean /= static_cast<double>(st.direct.size());
  EXPECT_NEAR(mean, cfg.target_mean_count, 3.0);
  EXPECT_FALSE(st.flagged);
}

TEST(ReweightExperiment, IndependentOfWorkerSplit) {
  ReweightConfig cfg;
  cfg.grid_size = 32;
  cfg.c_prime = -4.0;
  cfg.samples = 1000;
  cfg.epsilon = 0.5;
  const ReweightStats serial = reweighting_experiment(cfg);
  // Reversed index order stands in for an arbitrary schedule.
  const ParallelFor reversed = [](std::size_t n, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = n; i-- > 0;) body(i);
  };
  const ReweightStats other = reweighting_experiment(cfg, reversed);
  EXPECT_EQ(serial.weights, other.weights);
  EXPECT_EQ(serial.count_test.statistic, other.count_test.statistic);
  EXPECT_EQ(serial.ess, other.ess);
}
