#include "loopzeta_app/corpus.hpp"

#include <numeric>

#include "loopzeta/error.hpp"

namespace loopzeta::app {

namespace {

std::vector<Edge> random_edges(RandomStream& rng, int n, double p) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) {
        edges.push_back({u, v});
        if (rng.uniform() < 0.15) edges.push_back({u, v});
      }
    }
  }
  return edges;
}

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

Graph random_killed_graph(RandomStream& rng, int n, int boundary, double p) {
  if (n < 3 || n > 8 || boundary < 1 || boundary >= n) throw InvalidArgument("random_killed_graph: bad size");
  std::vector<int> b(static_cast<std::size_t>(boundary));
  std::iota(b.begin(), b.end(), n - boundary);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Graph g(n, random_edges(rng, n, p), b);
    if (g.is_connected()) return g;
  }
  throw NumericalError("random_killed_graph: no connected draw");
}

Graph random_connected_graph(RandomStream& rng, int n, double p) {
  if (n < 2) throw InvalidArgument("random_connected_graph: need n >= 2");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Graph g(n, random_edges(rng, n, p));
    if (g.is_connected()) return g;
  }
  throw NumericalError("random_connected_graph: no connected draw");
}

std::vector<Graph> tree_count_corpus() {
  std::vector<Graph> out;
  // Named graphs first: paths, cycles, complete graphs, a doubled edge.
  out.emplace_back(2, std::vector<Edge>{{0, 1}});
  out.emplace_back(2, std::vector<Edge>{{0, 1}, {0, 1}, {0, 1}});
  out.emplace_back(3, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}});
  out.emplace_back(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  std::vector<Edge> k5, k7;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) k5.push_back({u, v});
  for (int u = 0; u < 7; ++u)
    for (int v = u + 1; v < 7; ++v) k7.push_back({u, v});
  out.emplace_back(5, k5);
  out.emplace_back(7, k7);
  RandomStream rng(20240611, 3);
  while (out.size() < 50) {
    const int n = 3 + static_cast<int>(rng.next_u32() % 5);
    out.push_back(random_connected_graph(rng, n, 0.3 + 0.5 * rng.uniform()));
  }
  return out;
}

std::uint64_t enumerate_spanning_trees(const Graph& g) {
  const int n = g.vertex_count();
  const auto& edges = g.edges();
  const int m = static_cast<int>(edges.size());
  const int k = n - 1;
  if (k == 0) return 1;
  if (m < k) return 0;
  std::uint64_t count = 0;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    for (int e : pick) {
      const int a = find(parent, edges[static_cast<std::size_t>(e)].u);
      const int b = find(parent, edges[static_cast<std::size_t>(e)].v);
      if (a == b) {
        acyclic = false;
        break;
      }
      parent[static_cast<std::size_t>(a)] = b;
    }
    if (acyclic) ++count;
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j) - 1] + 1;
  }
  return count;
}

Graph two_interior_path() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 3}); }

}  // namespace loopzeta::app
