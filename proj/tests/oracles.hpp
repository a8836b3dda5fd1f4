#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "loopzeta/graph_loops.hpp"

namespace oracle {

/// Spanning trees by trying every (n-1)-subset of edges.
inline std::uint64_t spanning_trees_by_subsets(const loopzeta::Graph& g) {
  const int n = g.vertex_count();
  const auto& edges = g.edges();
  const int m = static_cast<int>(edges.size());
  if (n == 1) return 1;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (std::popcount(mask) != n - 1) continue;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask >> e & 1)) continue;
      const int a = find(edges[e].u), b = find(edges[e].v);
      if (a == b) acyclic = false;
      parent[a] = b;
    }
    if (acyclic) ++count;
  }
  return count;
}

/// Sum over closed interior walks of length k of the product of 1/deg
/// transition probabilities, by literal depth-first enumeration.
inline double closed_walk_weight(const loopzeta::Graph& g, int k) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
  for (const auto& e : g.edges()) {
    nbr[e.u].push_back(e.v);
    nbr[e.v].push_back(e.u);
  }
  double total = 0.0;
  std::function<void(int, int, int, double)> walk = [&](int start, int at, int steps, double w) {
    if (steps == k) {
      if (at == start) total += w;
      return;
    }
    for (int next : nbr[at]) {
      if (g.is_boundary(next)) continue;
      walk(start, next, steps + 1, w / static_cast<double>(nbr[at].size()));
    }
  };
  for (int v = 0; v < n; ++v) {
    if (!g.is_boundary(v)) walk(v, v, 0, 1.0);
  }
  return total;
}

/// Riemann zeta at s > 1 by direct summation with an Euler–Maclaurin tail.
inline double riemann_zeta(double s) {
  const int n = 2000;
  double sum = 0.0;
  for (int k = n - 1; k >= 1; --k) sum += std::pow(k, -s);
  const double nn = n;
  sum += std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s) + s / 12.0 * std::pow(nn, -s - 1.0) -
         s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(nn, -s - 3.0);
  return sum;
}

/// J_0(x) from its power series, summed in long double.
inline double bessel_j0_series(double x) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = -0.25L * static_cast<long double>(x) * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(static_cast<double>(term)) < 1e-30) break;
  }
  return static_cast<double>(sum);
}

/// Root of f on [a, b] by bisection (f(a), f(b) of opposite sign).
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::abs(b); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
