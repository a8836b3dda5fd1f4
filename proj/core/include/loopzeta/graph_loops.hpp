#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "loopzeta/linalg.hpp"

namespace loopzeta {

struct Edge {
  int u = 0;
  int v = 0;
};

/// Finite multigraph with an optional set of boundary (killing) vertices.
///
/// Multi-edges are allowed, self-loops are rejected. A graph with a non-empty
/// boundary is "killed": random walks stop when they step onto the boundary.
class Graph {
 public:
  Graph(int vertex_count, std::vector<Edge> edges, std::vector<int> boundary = {});

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& boundary() const { return boundary_; }
  std::span<const int> degrees() const { return degrees_; }
  int degree(int v) const { return degrees_[static_cast<std::size_t>(v)]; }

  bool is_boundary(int v) const { return is_boundary_[static_cast<std::size_t>(v)]; }
  bool is_killed() const { return !boundary_.empty(); }

  /// Interior vertices in increasing order (all vertices for a closed graph).
  const std::vector<int>& interior() const { return interior_; }

  /// Number of edges joining u and v.
  int multiplicity(int u, int v) const;

  bool is_connected() const;

  /// Edge-list text: optional "# vertices: n" and "# boundary: i j k" header
  /// lines, then one "u v" pair per line. Other '#' lines are comments.
  static Graph parse(std::istream& in);
  static Graph parse(const std::string& text);
  std::string to_edge_list() const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_;
  std::vector<int> degrees_;
  std::vector<bool> is_boundary_;
  std::vector<int> interior_;
};

/// Degree on the diagonal, minus the edge multiplicity off the diagonal.
Matrix graph_laplacian(const Graph& g);

/// Transition matrix of simple random walk restricted to the interior
/// vertices; steps onto the boundary are dropped (killed walk). For a closed
/// graph this is the full stochastic matrix. Throws on an interior vertex of
/// degree 0 ("undefined transition").
Matrix transition_matrix(const Graph& g);

/// I - P on the interior index set.
Matrix rw_laplacian(const Graph& g);

struct DeterminantIdentity {
  double det_graph = 0.0;      // Dirichlet minor of the graph Laplacian
  double det_rw = 0.0;         // det(I - P) on the interior
  double degree_product = 0.0; // product of interior degrees
};

/// det(graph Laplacian minor) = (product of degrees) * det(I - P).
/// Closed graphs return exact zeros for both determinants.
DeterminantIdentity determinant_identity(const Graph& g);

/// Upper bound on the spectral radius of a non-negative matrix: power
/// iteration followed by the Collatz–Wielandt bound max_i (P x)_i / x_i,
/// padded by 1e-12.
double spectral_radius_bound(const Matrix& p, int power_iterations = 200);

/// Total mass of the random-walk loop measure, -log det(I - P).
/// Throws NumericalError("non-transient walk") when the certified spectral
/// radius is not below 1 - 1e-12.
double loop_mass_exact(const Graph& g);

struct TruncatedLoopMass {
  double mass = 0.0;        // sum_{k <= L} tr(P^k)/k
  double tail_bound = 0.0;  // n rho^{L+1} / ((L+1)(1 - rho))
  double spectral_radius = 0.0;
  std::vector<double> terms;  // terms[k-1] = tr(P^k)/k
};

TruncatedLoopMass loop_mass_truncated(const Graph& g, int max_len);

/// -log det(I - alpha P), alpha in (0, 1); defined for closed graphs too.
double penalized_loop_mass(const Graph& g, double alpha);

/// Limit of -log det(I - alpha P) + log(1 - alpha) as alpha -> 1 for a
/// connected closed graph, i.e. -log det'(I - P). Evaluated by Richardson
/// extrapolation in (1 - alpha).
double penalized_mass_limit(const Graph& g);

/// -log det'(I - P) from the non-zero eigenvalues (dense symmetric solve of
/// D^{-1/2} L D^{-1/2}); the oracle for penalized_mass_limit.
double log_det_prime_rw(const Graph& g);

/// Kirchhoff count from the minor with `removed` row/column deleted.
/// Returns 0 for a disconnected graph.
std::uint64_t spanning_tree_count(const Graph& g, int removed = 0);

}  // namespace loopzeta
