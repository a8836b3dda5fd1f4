#include "loopzeta/subdivision.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <ostream>
#include <string>
#include <unordered_map>

#include "loopzeta/error.hpp"

namespace loopzeta {

namespace {

int resolve_cap(const GridField& field, int depth_cap) {
  if (depth_cap < 0) return field.level();
  if (depth_cap > field.level()) {
    throw InvalidArgument("depth cap " + std::to_string(depth_cap) + " exceeds grid level " +
                          std::to_string(field.level()));
  }
  return depth_cap;
}

void check_threshold(double Q, double epsilon) {
  if (!(Q > 0.0)) throw InvalidArgument("subdivision needs Q > 0");
  if (!(epsilon > 0.0)) throw InvalidArgument("subdivision needs epsilon > 0");
}

std::uint64_t square_key(const DyadicSquare& s) {
  return (static_cast<std::uint64_t>(s.level) << 58) | (static_cast<std::uint64_t>(s.i) << 29) |
         static_cast<std::uint64_t>(s.j);
}

}  // namespace

ChargeParams charge_to_params(double c) {
  if (!(c < 25.0)) throw InvalidArgument("Q undefined");
  ChargeParams p;
  p.c = c;
  p.Q = std::sqrt((25.0 - c) / 6.0);
  if (c <= 1.0) {
    // gamma^2 - 2 Q gamma + 4 = 0, smaller root; written to avoid cancellation.
    const double disc = std::sqrt(std::max(0.0, p.Q * p.Q - 4.0));
    p.gamma = 4.0 / (p.Q + disc);
  }
  return p;
}

double quantum_size(const GridField& field, double Q, const DyadicSquare& square, SizeMeasure measure) {
  const double side = square.side();
  return std::exp(square_average(field, square) / Q) * (measure == SizeMeasure::Area ? side * side : side);
}

DyadicPartition subdivide(const GridField& field, double Q, double epsilon, int depth_cap, ScanOrder order,
                          SizeMeasure measure) {
  check_threshold(Q, epsilon);
  DyadicPartition out;
  out.depth_cap = resolve_cap(field, depth_cap);
  std::vector<std::pair<DyadicSquare, bool>> found;
  std::deque<DyadicSquare> work{DyadicSquare{}};
  while (!work.empty()) {
    DyadicSquare s;
    if (order == ScanOrder::BreadthFirst) {
      s = work.front();
      work.pop_front();
    } else {
      s = work.back();
      work.pop_back();
    }
    if (quantum_size(field, Q, s, measure) <= epsilon) {
      found.emplace_back(s, false);
    } else if (s.level == out.depth_cap) {
      found.emplace_back(s, true);
      out.terminated = false;
    } else {
      for (int q = 0; q < 4; ++q) work.push_back(s.child(q));
    }
  }
  std::sort(found.begin(), found.end());
  out.squares.reserve(found.size());
  out.flagged.reserve(found.size());
  for (const auto& [s, f] : found) {
    out.squares.push_back(s);
    out.flagged.push_back(f);
  }
  return out;
}

PartitionSummary subdivide_summary(const GridField& field, double Q, double epsilon, int depth_cap,
                                   SizeMeasure measure) {
  check_threshold(Q, epsilon);
  const int cap = resolve_cap(field, depth_cap);
  PartitionSummary out;
  out.level_counts.assign(static_cast<std::size_t>(cap) + 1, 0);
  std::vector<DyadicSquare> stack{DyadicSquare{}};
  while (!stack.empty()) {
    const DyadicSquare s = stack.back();
    stack.pop_back();
    const bool small = quantum_size(field, Q, s, measure) <= epsilon;
    if (small || s.level == cap) {
      ++out.square_count;
      ++out.level_counts[static_cast<std::size_t>(s.level)];
      if (!small) {
        ++out.flagged_count;
        out.terminated = false;
      }
    } else {
      for (int q = 3; q >= 0; --q) stack.push_back(s.child(q));
    }
  }
  return out;
}

PartitionSummary summarize(const DyadicPartition& partition) {
  PartitionSummary out;
  out.level_counts.assign(static_cast<std::size_t>(partition.depth_cap) + 1, 0);
  out.terminated = partition.terminated;
  for (std::size_t k = 0; k < partition.squares.size(); ++k) {
    const auto level = static_cast<std::size_t>(partition.squares[k].level);
    if (level >= out.level_counts.size()) out.level_counts.resize(level + 1, 0);
    ++out.level_counts[level];
    ++out.square_count;
    if (partition.flagged[k]) ++out.flagged_count;
  }
  return out;
}

double partition_area(const DyadicPartition& partition) {
  // Counts per level are exact integers; fold from the deepest level up so
  // every carry is exact.
  int deepest = 0;
  for (const auto& s : partition.squares) deepest = std::max(deepest, s.level);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(deepest) + 1, 0);
  for (const auto& s : partition.squares) ++counts[static_cast<std::size_t>(s.level)];
  double remainder = 0.0;
  for (int level = deepest; level > 0; --level) {
    const std::uint64_t c = counts[static_cast<std::size_t>(level)];
    counts[static_cast<std::size_t>(level) - 1] += c / 4;
    remainder += std::ldexp(static_cast<double>(c % 4), -2 * level);
  }
  return static_cast<double>(counts[0]) + remainder;
}

Graph adjacency_graph(const DyadicPartition& partition) {
  const auto& sq = partition.squares;
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(sq.size() * 2);
  for (std::size_t v = 0; v < sq.size(); ++v) index.emplace(square_key(sq[v]), static_cast<int>(v));

  constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < sq.size(); ++v) {
    const DyadicSquare& s = sq[v];
    const std::int64_t n = std::int64_t{1} << s.level;
    for (std::size_t d = 0; d < kDirections.size(); ++d) {
      DyadicSquare t{s.level, s.i + kDirections[d][0], s.j + kDirections[d][1]};
      if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n) continue;
      // The neighbour across this side is t or one of its ancestors; finer
      // neighbours find s from their side instead.
      while (true) {
        auto it = index.find(square_key(t));
        if (it != index.end()) {
          const bool coarser = t.level < s.level;
          if (coarser || d < 2) edges.push_back({static_cast<int>(v), it->second});
          break;
        }
        if (t.level == 0) break;
        t = t.parent();
      }
    }
  }
  return Graph(static_cast<int>(std::max<std::size_t>(sq.size(), 1)), std::move(edges));
}

int square_containing(const DyadicPartition& partition, double x, double y) {
  for (std::size_t v = 0; v < partition.squares.size(); ++v) {
    const auto& s = partition.squares[v];
    const double h = s.side();
    const double x0 = static_cast<double>(s.i) * h;
    const double y0 = static_cast<double>(s.j) * h;
    const bool in_x = x >= x0 && (x < x0 + h || (x == 1.0 && x0 + h == 1.0));
    const bool in_y = y >= y0 && (y < y0 + h || (y == 1.0 && y0 + h == 1.0));
    if (in_x && in_y) return static_cast<int>(v);
  }
  return -1;
}

std::vector<std::int64_t> ball_growth(const Graph& graph, int root, int max_radius) {
  const int n = graph.vertex_count();
  if (root < 0 || root >= n) throw InvalidArgument("ball_growth: root out of range");
  if (max_radius < 0) throw InvalidArgument("ball_growth: negative radius");
  std::vector<int> offset(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : graph.edges()) {
    ++offset[static_cast<std::size_t>(e.u) + 1];
    ++offset[static_cast<std::size_t>(e.v) + 1];
  }
  for (int v = 0; v < n; ++v) offset[static_cast<std::size_t>(v) + 1] += offset[static_cast<std::size_t>(v)];
  std::vector<int> adj(static_cast<std::size_t>(offset.back()));
  std::vector<int> fill(offset.begin(), offset.end() - 1);
  for (const Edge& e : graph.edges()) {
    adj[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = e.v;
    adj[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++)] = e.u;
  }
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<std::int64_t> shells(static_cast<std::size_t>(max_radius) + 1, 0);
  std::vector<int> frontier{root};
  dist[static_cast<std::size_t>(root)] = 0;
  for (int r = 0; r <= max_radius && !frontier.empty(); ++r) {
    shells[static_cast<std::size_t>(r)] = static_cast<std::int64_t>(frontier.size());
    std::vector<int> next;
    for (int v : frontier) {
      for (int k = offset[static_cast<std::size_t>(v)]; k < offset[static_cast<std::size_t>(v) + 1]; ++k) {
        const int w = adj[static_cast<std::size_t>(k)];
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = r + 1;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  return shells;
}

void write_partition_csv(std::ostream& out, const DyadicPartition& partition) {
  out << "level,i,j,flagged\n";
  for (std::size_t k = 0; k < partition.squares.size(); ++k) {
    const auto& s = partition.squares[k];
    out << s.level << ',' << s.i << ',' << s.j << ',' << (partition.flagged[k] ? 1 : 0) << '\n';
  }
}

void write_partition_svg(std::ostream& out, const DyadicPartition& partition, int pixels) {
  static constexpr std::array<const char*, 12> kPalette{
      "#440154", "#482878", "#3e4989", "#31688e", "#26828e", "#1f9e89",
      "#35b779", "#6ece58", "#b5de2b", "#fde725", "#fca636", "#e16462"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
      << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
  const double stroke = partition.squares.size() > 20000 ? 0.0 : 0.25;
  for (const auto& s : partition.squares) {
    const double h = s.side() * pixels;
    const double x = static_cast<double>(s.i) * h;
    const double y = pixels - static_cast<double>(s.j + 1) * h;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << h << "\" height=\"" << h << "\" fill=\""
        << kPalette[static_cast<std::size_t>(s.level) % kPalette.size()] << "\" stroke=\"black\" stroke-width=\""
        << stroke << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace loopzeta
