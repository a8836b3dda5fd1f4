#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/gff_field.hpp"
#include "loopzeta/random.hpp"

using namespace loopzeta;

namespace {

// Five-point Dirichlet Laplacian on the (n-1)^2 interior vertices, built
// entry by entry.
Matrix hand_laplacian(int n) {
  const int m = n - 1;
  Matrix l = Matrix::Zero(m * m, m * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const int v = r * m + c;
      l(v, v) = 4.0;
      if (c + 1 < m) l(v, v + 1) = l(v + 1, v) = -1.0;
      if (r + 1 < m) l(v, v + m) = l(v + m, v) = -1.0;
    }
  }
  return l;
}

double naive_square_mean(const GridField& f, const DyadicSquare& s) {
  const int cells = f.size() >> s.level;
  double sum = 0.0;
  for (int r = static_cast<int>(s.j) * cells; r < static_cast<int>(s.j + 1) * cells; ++r)
    for (int c = static_cast<int>(s.i) * cells; c < static_cast<int>(s.i + 1) * cells; ++c)
      sum += 0.25 * (f.vertex(r, c) + f.vertex(r + 1, c) + f.vertex(r, c + 1) + f.vertex(r + 1, c + 1));
  return sum / (double(cells) * cells);
}

}  // namespace

TEST(Gff, DeterministicPerSeedAndStream) {
  const GridField a = sample_dgff(32, 5), b = sample_dgff(32, 5);
  EXPECT_EQ(a.vertex_values(), b.vertex_values());
  EXPECT_NE(a.vertex_values(), sample_dgff(32, 6).vertex_values());
  EXPECT_NE(a.vertex_values(), sample_dgff(32, 5, 1).vertex_values());
  EXPECT_EQ(sample_dgff(32, 5, 1).vertex_values(), sample_dgff(32, 5, 1).vertex_values());
  EXPECT_EQ(a.seed(), 5u);
}

TEST(Gff, BoundaryIsZero) {
  const GridField f = sample_dgff(64, 1);
  for (int k = 0; k <= 64; ++k) {
    EXPECT_EQ(f.vertex(0, k), 0.0);
    EXPECT_EQ(f.vertex(64, k), 0.0);
    EXPECT_EQ(f.vertex(k, 0), 0.0);
    EXPECT_EQ(f.vertex(k, 64), 0.0);
  }
  std::vector<double> bad((17 * 17), 0.0);
  bad[0] = 1.0;
  EXPECT_THROW(GridField(4, bad), InvalidArgument);
}

TEST(Gff, SizeRange) {
  EXPECT_THROW(sample_dgff(8, 1), InvalidArgument);
  EXPECT_THROW(sample_dgff(48, 1), InvalidArgument);
  EXPECT_THROW(sample_dgff(16384, 1), InvalidArgument);
  EXPECT_NO_THROW(sample_dgff(16, 1));
}

TEST(Gff, CovarianceMatchesInverseLaplacian) {
  const int n = 16, samples = 10000;
  const Matrix green = GridField::normalization() * hand_laplacian(n).inverse();
  const int m = n - 1;
  const std::pair<int, int> pairs[] = {{7 * m + 7, 7 * m + 7}, {7 * m + 7, 7 * m + 8}, {0, 0}, {3 * m + 4, 10 * m + 2},
                                       {14 * m + 14, 13 * m + 14}};
  std::vector<std::vector<double>> products(5);
  for (int s = 0; s < samples; ++s) {
    const auto x = sample_dgff(n, 1818, static_cast<std::uint64_t>(s)).interior_values();
    for (int k = 0; k < 5; ++k) products[k].push_back(x[pairs[k].first] * x[pairs[k].second]);
  }
  for (int k = 0; k < 5; ++k) {
    double mean = 0.0, sq = 0.0;
    for (double v : products[k]) mean += v;
    mean /= samples;
    for (double v : products[k]) sq += (v - mean) * (v - mean);
    const double se = std::sqrt(sq / (samples - 1) / samples);
    EXPECT_LE(std::abs(mean - green(pairs[k].first, pairs[k].second)), 5 * se) << "pair " << k;
  }
}

TEST(Gff, CenteredField) {
  const int n = 16, samples = 10000, m = (n - 1) * (n - 1);
  std::vector<double> sum(m, 0.0), sq(m, 0.0);
  for (int s = 0; s < samples; ++s) {
    const auto x = sample_dgff(n, 77, static_cast<std::uint64_t>(s)).interior_values();
    for (int i = 0; i < m; ++i) {
      sum[i] += x[i];
      sq[i] += x[i] * x[i];
    }
  }
  for (int i = 0; i < m; ++i) {
    const double mean = sum[i] / samples;
    const double se = std::sqrt((sq[i] / samples - mean * mean) / samples);
    EXPECT_LE(std::abs(mean), 5 * se) << i;
  }
}

TEST(Gff, DirichletEnergyCountsModes) {
  const int n = 32, samples = 1000;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double e = sample_dgff(n, 4242, static_cast<std::uint64_t>(s)).dirichlet_energy();
    sum += e;
    sq += e * e;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sq / samples - mean * mean) / samples);
  EXPECT_LE(std::abs(mean - 31.0 * 31.0), 3 * se);
}

TEST(SquareAverage, ConstantInteriorAwayFromTheBoundary) {
  const int k = 4, n = 16;
  std::vector<double> interior((n - 1) * (n - 1), 2.5);
  const GridField f = GridField::from_interior(k, interior);
  // Cells that do not touch the zero ring carry the constant exactly.
  for (int i = 1; i < 3; ++i)
    for (int j = 1; j < 3; ++j) EXPECT_DOUBLE_EQ(square_average(f, {2, i, j}), 2.5);
  EXPECT_DOUBLE_EQ(square_average(f, {4, 5, 9}), 2.5);
}

TEST(SquareAverage, ParentIsMeanOfChildren) {
  const GridField f = sample_dgff(128, 9);
  RandomStream rng(9, 1);
  for (int t = 0; t < 200; ++t) {
    const int level = static_cast<int>(rng.next_u32() % 7);
    const std::int64_t side = std::int64_t{1} << level;
    const DyadicSquare s{level, static_cast<std::int64_t>(rng.next_u64() % side),
                         static_cast<std::int64_t>(rng.next_u64() % side)};
    double children = 0.0;
    for (int q = 0; q < 4; ++q) children += square_average(f, s.child(q));
    EXPECT_NEAR(square_average(f, s), children / 4, 1e-12);
  }
}

TEST(SquareAverage, PrefixSumsMatchDirectSummation) {
  const GridField f = sample_dgff(64, 13);
  RandomStream rng(13, 1);
  for (int t = 0; t < 200; ++t) {
    const int level = static_cast<int>(rng.next_u32() % 7);
    const std::int64_t side = std::int64_t{1} << level;
    const DyadicSquare s{level, static_cast<std::int64_t>(rng.next_u64() % side),
                         static_cast<std::int64_t>(rng.next_u64() % side)};
    EXPECT_NEAR(square_average(f, s), naive_square_mean(f, s), 1e-12);
  }
  EXPECT_NEAR(f.block_average(3, 17, 5, 40), [&] {
    double sum = 0.0;
    for (int r = 3; r < 17; ++r)
      for (int c = 5; c < 40; ++c) sum += f.cell(r, c);
    return sum / (14.0 * 35.0);
  }(), 1e-12);
}

TEST(SquareAverage, ResolutionExhausted) {
  const GridField f = sample_dgff(16, 1);
  try {
    square_average(f, {5, 0, 0});
    FAIL() << "expected a throw";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("resolution exhausted"), std::string::npos);
  }
  EXPECT_NO_THROW(square_average(f, {4, 15, 15}));
  EXPECT_THROW(square_average(f, {2, 4, 0}), InvalidArgument);
}

TEST(GreenOracle, SymmetricPositiveDefinite) {
  const Matrix g = green_oracle(16);
  EXPECT_LT((g - g.transpose()).norm(), 1e-12);
  Eigen::LLT<Matrix> llt(g);
  EXPECT_EQ(llt.info(), Eigen::Success);
  EXPECT_LT((g - GridField::normalization() * hand_laplacian(16).inverse()).norm(), 1e-10);
}

TEST(GreenOracle, RowsSolveThePointSource) {
  const Matrix g = green_oracle(32);
  const Matrix l = dirichlet_laplacian_matrix(32);
  EXPECT_EQ(l, hand_laplacian(32));
  for (int p : {0, 100, 480, 960}) {
    Vector e = Vector::Zero(g.rows());
    e(p) = GridField::normalization();
    EXPECT_LT((l * g.col(p) - e).cwiseAbs().maxCoeff(), 1e-10) << p;
  }
}

TEST(GreenOracle, DiagonalGrowsTowardTheCenter) {
  const Matrix g = green_oracle(32);
  const int m = 31;
  for (int k = 0; k < 15; ++k) EXPECT_LT(g(k * m + k, k * m + k), g((k + 1) * m + k + 1, (k + 1) * m + k + 1)) << k;
  EXPECT_THROW(green_oracle(64), InvalidArgument);
}

TEST(PoissonSolver, MatchesDenseSolve) {
  const int n = 32, m = (n - 1) * (n - 1);
  RandomStream rng(3, 3);
  std::vector<double> rhs(m);
  for (auto& v : rhs) v = rng.normal();
  const auto u = solve_dirichlet_laplacian(n, rhs);
  const Vector dense = hand_laplacian(n).ldlt().solve(Eigen::Map<const Vector>(rhs.data(), m));
  for (int i = 0; i < m; ++i) EXPECT_NEAR(u[i], dense(i), 1e-11);
}

TEST(FieldDump, RoundTripAndLayout) {
  const GridField f = sample_dgff(16, 321);
  std::stringstream buf;
  write_field(buf, f);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 16u + 17u * 17u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "LZGF");
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::memcpy(&k, bytes.data() + 4, 4);
  std::memcpy(&seed, bytes.data() + 8, 8);
  EXPECT_EQ(k, 4u);
  EXPECT_EQ(seed, 321u);
  const GridField back = read_field(buf);
  EXPECT_EQ(back.vertex_values(), f.vertex_values());
  EXPECT_EQ(back.seed(), 321u);
  std::stringstream junk("NOPE0000000000000000");
  EXPECT_THROW(read_field(junk), InvalidArgument);
}
