#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "loopzeta/error.hpp"
#include "loopzeta/subdivision.hpp"

using namespace loopzeta;

namespace {

GridField zero_field(int level) {
  const std::size_t n = (std::size_t{1} << level) + 1;
  return GridField(level, std::vector<double>(n * n, 0.0));
}

GridField scaled(const GridField& f, double t) {
  auto v = f.vertex_values();
  for (auto& x : v) x *= t;
  return GridField(f.level(), v, f.seed());
}

DyadicPartition uniform(int level) {
  DyadicPartition p;
  const std::int64_t n = std::int64_t{1} << level;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) p.squares.push_back({level, i, j});
  std::sort(p.squares.begin(), p.squares.end());
  p.flagged.assign(p.squares.size(), false);
  p.depth_cap = level;
  return p;
}

// Positive-length contact by integer geometry at a common fine level.
std::set<std::pair<int, int>> brute_adjacency(const DyadicPartition& p) {
  int fine = 0;
  for (const auto& s : p.squares) fine = std::max(fine, s.level);
  struct Box {
    std::int64_t x0, x1, y0, y1;
  };
  std::vector<Box> boxes;
  for (const auto& s : p.squares) {
    const std::int64_t k = std::int64_t{1} << (fine - s.level);
    boxes.push_back({s.i * k, (s.i + 1) * k, s.j * k, (s.j + 1) * k});
  }
  std::set<std::pair<int, int>> edges;
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t b = a + 1; b < boxes.size(); ++b) {
      const Box &u = boxes[a], &v = boxes[b];
      const bool touch_x = (u.x1 == v.x0 || v.x1 == u.x0) && std::min(u.y1, v.y1) > std::max(u.y0, v.y0);
      const bool touch_y = (u.y1 == v.y0 || v.y1 == u.y0) && std::min(u.x1, v.x1) > std::max(u.x0, v.x0);
      if (touch_x || touch_y) edges.insert({static_cast<int>(a), static_cast<int>(b)});
    }
  }
  return edges;
}

std::set<std::pair<int, int>> graph_edges(const Graph& g) {
  std::set<std::pair<int, int>> e;
  for (const auto& x : g.edges()) e.insert({std::min(x.u, x.v), std::max(x.u, x.v)});
  return e;
}

bool is_ancestor(const DyadicSquare& a, const DyadicSquare& b) { return a.level < b.level && a.contains(b); }

}  // namespace

TEST(Charge, NamedValues) {
  const ChargeParams zero = charge_to_params(0.0);
  EXPECT_NEAR(zero.Q, 2.04, 0.005);
  ASSERT_TRUE(zero.gamma.has_value());
  EXPECT_NEAR(*zero.gamma, std::sqrt(8.0 / 3.0), 1e-12);
  const ChargeParams nineteen = charge_to_params(19.0);
  EXPECT_NEAR(nineteen.Q, 1.0, 1e-15);
  EXPECT_FALSE(nineteen.gamma.has_value());
  const ChargeParams neg = charge_to_params(-12.5);
  EXPECT_NEAR(neg.Q, 2.5, 1e-15);
  EXPECT_NEAR(*neg.gamma, 1.0, 1e-12);
}

TEST(Charge, Invariants) {
  for (double c = -40.0; c < 25.0; c += 0.37) {
    const ChargeParams p = charge_to_params(c);
    EXPECT_NEAR(25.0 - 6.0 * p.Q * p.Q, c, 1e-12);
    EXPECT_EQ(p.gamma.has_value(), c <= 1.0);
    if (p.gamma) {
      EXPECT_GT(*p.gamma, 0.0);
      EXPECT_LE(*p.gamma, 2.0);
      EXPECT_NEAR(*p.gamma / 2 + 2 / *p.gamma, p.Q, 1e-12);
    }
  }
  EXPECT_NEAR(*charge_to_params(1.0).gamma, 2.0, 1e-7);
}

TEST(Charge, UndefinedAtTwentyFive) {
  for (double c : {25.0, 30.0}) {
    try {
      charge_to_params(c);
      FAIL() << "expected a throw";
    } catch (const InvalidArgument& e) {
      EXPECT_NE(std::string(e.what()).find("Q undefined"), std::string::npos);
    }
  }
}

TEST(QuantumSize, ZeroFieldIsSideLength) {
  const GridField f = zero_field(5);
  EXPECT_DOUBLE_EQ(quantum_size(f, 2.0, {0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(quantum_size(f, 2.0, {3, 1, 2}), 0.125);
  EXPECT_DOUBLE_EQ(quantum_size(f, 2.0, {3, 1, 2}, SizeMeasure::Area), 0.125 * 0.125);
}

TEST(QuantumSize, ExponentLogTwo) {
  const GridField base = sample_dgff(32, 3);
  const double q = 1.7;
  const GridField f = scaled(base, q * std::log(2.0) / square_average(base, {}));
  EXPECT_NEAR(quantum_size(f, q, {}), 2.0, 1e-12);
}

TEST(QuantumSize, OnlyTheRatioEnters) {
  const GridField f = sample_dgff(64, 8);
  const GridField f3 = scaled(f, 3.0);
  for (const DyadicSquare s : {DyadicSquare{0, 0, 0}, DyadicSquare{2, 1, 3}, DyadicSquare{6, 40, 7}}) {
    EXPECT_NEAR(quantum_size(f, 2.0, s), quantum_size(f3, 6.0, s), 1e-14);
  }
}

TEST(Subdivide, RootAlreadySmall) {
  const GridField f = sample_dgff(64, 2);
  const DyadicPartition p = subdivide(f, 2.0, quantum_size(f, 2.0, {}));
  ASSERT_EQ(p.squares.size(), 1u);
  EXPECT_EQ(p.squares[0], (DyadicSquare{0, 0, 0}));
  EXPECT_TRUE(p.terminated);
}

TEST(Subdivide, ZeroFieldUniform) {
  const DyadicPartition p = subdivide(zero_field(6), 3.0, 0.3);
  ASSERT_EQ(p.squares.size(), 16u);
  for (const auto& s : p.squares) EXPECT_EQ(s.level, 2);
  EXPECT_TRUE(p.terminated);
}

TEST(Subdivide, DepthCapFlags) {
  const DyadicPartition p = subdivide(zero_field(6), 3.0, 1e-3, 3);
  EXPECT_EQ(p.squares.size(), 64u);
  EXPECT_FALSE(p.terminated);
  EXPECT_EQ(std::count(p.flagged.begin(), p.flagged.end(), true), 64);
  EXPECT_EQ(p.depth_cap, 3);
  EXPECT_THROW(subdivide(zero_field(6), 3.0, 1e-3, 7), InvalidArgument);
  EXPECT_THROW(subdivide(zero_field(6), 3.0, 0.0), InvalidArgument);
}

TEST(Subdivide, CharacterizationAndArea) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridField f = sample_dgff(256, seed);
    const double q = 2.0, eps = 3e-3 * quantum_size(f, q, {});
    const DyadicPartition p = subdivide(f, q, eps);
    EXPECT_EQ(partition_area(p), 1.0);
    for (std::size_t k = 0; k < p.squares.size(); ++k) {
      const DyadicSquare s = p.squares[k];
      if (!p.flagged[k]) {
        EXPECT_LE(quantum_size(f, q, s), eps);
      } else {
        EXPECT_EQ(s.level, p.depth_cap);
        EXPECT_GT(quantum_size(f, q, s), eps);
      }
      for (DyadicSquare a = s; a.level > 0;) {
        a = a.parent();
        ASSERT_GT(quantum_size(f, q, a), eps);
      }
    }
    // Disjoint interiors: no square is an ancestor of another.
    for (std::size_t a = 0; a < p.squares.size(); a += 37)
      for (std::size_t b = 0; b < p.squares.size(); ++b) EXPECT_FALSE(is_ancestor(p.squares[a], p.squares[b]));
  }
}

TEST(Subdivide, OrderIndependent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridField f = sample_dgff(128, seed);
    const double eps = 5e-3 * quantum_size(f, 2.0, {});
    const auto a = subdivide(f, 2.0, eps, -1, ScanOrder::BreadthFirst);
    const auto b = subdivide(f, 2.0, eps, -1, ScanOrder::DepthFirst);
    EXPECT_EQ(a.squares, b.squares);
    EXPECT_EQ(a.flagged, b.flagged);
  }
}

TEST(Subdivide, RefinesAsEpsilonShrinks) {
  const GridField f = sample_dgff(256, 21);
  const double root = quantum_size(f, 2.0, {});
  const auto coarse = subdivide(f, 2.0, 1e-2 * root);
  const auto fine = subdivide(f, 2.0, 2e-3 * root);
  EXPECT_GT(fine.squares.size(), coarse.squares.size());
  for (const auto& s : fine.squares) {
    bool inside = false;
    for (const auto& c : coarse.squares) inside = inside || c.contains(s);
    EXPECT_TRUE(inside);
  }
}

TEST(Subdivide, DependsOnlyOnFieldOverQ) {
  const GridField f = sample_dgff(128, 30);
  const double eps = 4e-3 * quantum_size(f, 2.0, {});
  EXPECT_EQ(subdivide(f, 2.0, eps).squares, subdivide(scaled(f, 0.5), 1.0, eps).squares);
}

TEST(Subdivide, SummaryMatchesFullPartition) {
  for (double c : {0.0, 20.0}) {
    const GridField f = sample_dgff(256, 5);
    const double q = charge_to_params(c).Q;
    const double eps = 2e-3 * quantum_size(f, q, {});
    const PartitionSummary a = summarize(subdivide(f, q, eps));
    const PartitionSummary b = subdivide_summary(f, q, eps);
    EXPECT_EQ(a.square_count, b.square_count);
    EXPECT_EQ(a.flagged_count, b.flagged_count);
    EXPECT_EQ(a.level_counts, b.level_counts);
    EXPECT_EQ(a.terminated, b.terminated);
  }
}

TEST(Adjacency, FourSquaresFormACycle) {
  const Graph g = adjacency_graph(uniform(1));
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edges().size(), 4u);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2);
}

TEST(Adjacency, SixteenSquaresFormAGrid) {
  const DyadicPartition p = uniform(2);
  const Graph g = adjacency_graph(p);
  EXPECT_EQ(g.edges().size(), 24u);
  EXPECT_EQ(graph_edges(g), brute_adjacency(p));
}

TEST(Adjacency, BigSquareTouchesBothSmallNeighbours) {
  DyadicPartition p;
  p.squares = {{1, 0, 0}, {1, 0, 1}, {1, 1, 1}, {2, 2, 0}, {2, 3, 0}, {2, 2, 1}, {2, 3, 1}};
  std::sort(p.squares.begin(), p.squares.end());
  p.flagged.assign(p.squares.size(), false);
  p.depth_cap = 2;
  const Graph g = adjacency_graph(p);
  const auto idx = [&](DyadicSquare s) {
    return static_cast<int>(std::find(p.squares.begin(), p.squares.end(), s) - p.squares.begin());
  };
  const auto e = graph_edges(g);
  const int big = idx({1, 0, 0});
  for (DyadicSquare s : {DyadicSquare{2, 2, 0}, DyadicSquare{2, 2, 1}}) {
    const int o = idx(s);
    EXPECT_TRUE(e.count({std::min(big, o), std::max(big, o)}));
  }
  EXPECT_EQ(e, brute_adjacency(p));
}

TEST(Adjacency, MatchesBruteForceOnRandomPartitions) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const GridField f = sample_dgff(64, seed);
    const DyadicPartition p = subdivide(f, 1.0, 2e-2 * quantum_size(f, 1.0, {}));
    ASSERT_LT(p.squares.size(), 3000u);
    EXPECT_EQ(graph_edges(adjacency_graph(p)), brute_adjacency(p)) << seed;
  }
}

TEST(BallGrowth, CycleAndGrid) {
  EXPECT_EQ(ball_growth(adjacency_graph(uniform(1)), 0, 2), (std::vector<std::int64_t>{1, 2, 1}));
  // 16 x 16 grid from an interior vertex: shells 4r until the walls interfere.
  const DyadicPartition p = uniform(4);
  const int root = square_containing(p, 0.5, 0.5);
  EXPECT_EQ(p.squares[root], (DyadicSquare{4, 8, 8}));
  const auto shells = ball_growth(adjacency_graph(p), root, 6);
  for (int r = 1; r <= 6; ++r) EXPECT_EQ(shells[r], 4 * r) << r;
  EXPECT_THROW(ball_growth(adjacency_graph(p), 256, 2), InvalidArgument);
}

TEST(BallGrowth, SuperlinearNearTwentyFour) {
  const GridField f = sample_dgff(256, 1);
  const double q = charge_to_params(24.0).Q;
  const DyadicPartition p = subdivide(f, q, 2e-4 * quantum_size(f, q, {}));
  const auto shells = ball_growth(adjacency_graph(p), square_containing(p, 0.5, 0.5), 20);
  double ball = 1.0, prev_ratio = 0.0;
  for (int r = 1; r <= 20; ++r) {
    ball += static_cast<double>(shells[r]);
    EXPECT_GT(ball / r, prev_ratio) << r;
    prev_ratio = ball / r;
  }
}

TEST(PartitionOutput, CsvAndSvg) {
  const DyadicPartition p = subdivide(zero_field(5), 1.0, 0.3);
  std::ostringstream csv, svg;
  write_partition_csv(csv, p);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "level,i,j,flagged");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
  write_partition_svg(svg, p, 256);
  const std::string s = svg.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  std::size_t rects = 0;
  for (std::size_t at = s.find("<rect"); at != std::string::npos; at = s.find("<rect", at + 1)) ++rects;
  EXPECT_GE(rects, 16u);
}
