#include "loopzeta/graph_loops.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "loopzeta/error.hpp"
#include "loopzeta/stats.hpp"

namespace loopzeta {

Graph::Graph(int vertex_count, std::vector<Edge> edges, std::vector<int> boundary)
    : vertex_count_(vertex_count), edges_(std::move(edges)), boundary_(std::move(boundary)) {
  if (vertex_count_ <= 0) throw InvalidArgument("graph: vertex_count must be positive");
  const auto n = static_cast<std::size_t>(vertex_count_);
  degrees_.assign(n, 0);
  is_boundary_.assign(n, false);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_) {
      throw InvalidArgument("graph: edge endpoint out of range");
    }
    if (e.u == e.v) throw InvalidArgument("graph: self-loops are not allowed");
    ++degrees_[static_cast<std::size_t>(e.u)];
    ++degrees_[static_cast<std::size_t>(e.v)];
  }
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  for (int b : boundary_) {
    if (b < 0 || b >= vertex_count_) throw InvalidArgument("graph: boundary vertex out of range");
    is_boundary_[static_cast<std::size_t>(b)] = true;
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (!is_boundary_[static_cast<std::size_t>(v)]) interior_.push_back(v);
  }
}

int Graph::multiplicity(int u, int v) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return (e.u == u && e.v == v) || (e.u == v && e.v == u);
  }));
}

bool Graph::is_connected() const {
  std::vector<int> parent(static_cast<std::size_t>(vertex_count_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = vertex_count_;
  for (const Edge& e : edges_) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

Graph Graph::parse(std::istream& in) {
  std::vector<Edge> edges;
  std::vector<int> boundary;
  int declared_vertices = -1;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      header >> key;
      if (key == "boundary:") {
        int b;
        while (header >> b) {
          boundary.push_back(b);
          max_index = std::max(max_index, b);
        }
      } else if (key == "vertices:") {
        header >> declared_vertices;
      }
      continue;
    }
    std::istringstream row(line);
    Edge e;
    if (!(row >> e.u >> e.v)) {
      throw InvalidArgument("graph: cannot parse edge on line " + std::to_string(line_no));
    }
    max_index = std::max({max_index, e.u, e.v});
    edges.push_back(e);
  }
  const int n = declared_vertices > 0 ? declared_vertices : max_index + 1;
  return Graph(n, std::move(edges), std::move(boundary));
}

Graph Graph::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::string Graph::to_edge_list() const {
  std::ostringstream out;
  out << "# vertices: " << vertex_count_ << "\n";
  if (!boundary_.empty()) {
    out << "# boundary:";
    for (int b : boundary_) out << ' ' << b;
    out << "\n";
  }
  for (const Edge& e : edges_) out << e.u << ' ' << e.v << "\n";
  return out.str();
}

Matrix graph_laplacian(const Graph& g) {
  const int n = g.vertex_count();
  Matrix lap = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
  }
  return lap;
}

Matrix transition_matrix(const Graph& g) {
  const auto& interior = g.interior();
  const auto m = static_cast<Eigen::Index>(interior.size());
  std::vector<int> index_of(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Eigen::Index i = 0; i < m; ++i) index_of[static_cast<std::size_t>(interior[static_cast<std::size_t>(i)])] = static_cast<int>(i);
  for (int v : interior) {
    if (g.degree(v) == 0) {
      throw InvalidArgument("undefined transition: interior vertex " + std::to_string(v) +
                            " has degree 0");
    }
  }
  Matrix p = Matrix::Zero(m, m);
  for (const Edge& e : g.edges()) {
    const int iu = index_of[static_cast<std::size_t>(e.u)];
    const int iv = index_of[static_cast<std::size_t>(e.v)];
    if (iu >= 0 && iv >= 0) {
      p(iu, iv) += 1.0 / g.degree(e.u);
      p(iv, iu) += 1.0 / g.degree(e.v);
    }
  }
  return p;
}

Matrix rw_laplacian(const Graph& g) {
  const Matrix p = transition_matrix(g);
  return Matrix::Identity(p.rows(), p.cols()) - p;
}

DeterminantIdentity determinant_identity(const Graph& g) {
  DeterminantIdentity result;
  result.degree_product = 1.0;
  for (int v : g.interior()) result.degree_product *= g.degree(v);
  if (!g.is_killed()) {
    // Both Laplacians annihilate the constant vector.
    result.det_graph = 0.0;
    result.det_rw = 0.0;
    return result;
  }
  const Matrix full = graph_laplacian(g);
  const auto& interior = g.interior();
  const auto m = static_cast<Eigen::Index>(interior.size());
  Matrix minor(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      minor(i, j) = full(interior[static_cast<std::size_t>(i)], interior[static_cast<std::size_t>(j)]);
  result.det_graph = determinant(minor);
  result.det_rw = determinant(rw_laplacian(g));
  return result;
}

double spectral_radius_bound(const Matrix& p, int power_iterations) {
  const Eigen::Index n = p.rows();
  if (n == 0) return 0.0;
  if ((p.array() < 0.0).any()) throw InvalidArgument("spectral_radius_bound: matrix has negative entries");
  // The lazy chain (I + P)/2 shares the Perron vector of P and is aperiodic.
  Vector x = Vector::Ones(n);
  for (int it = 0; it < power_iterations; ++it) {
    Vector next = 0.5 * (x + p * x);
    const double norm = next.maxCoeff();
    if (!(norm > 0.0)) break;
    x = next / norm;
  }
  if ((x.array() <= 0.0).any()) x = Vector::Ones(n);
  const Vector px = p * x;
  double bound = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) bound = std::max(bound, px[i] / x[i]);
  return bound + 1e-12;
}

namespace {

void require_transient(const Matrix& p) {
  const double rho = spectral_radius_bound(p);
  if (rho >= 1.0 - 1e-12) {
    throw NumericalError("non-transient walk: certified spectral radius bound " +
                         std::to_string(rho) + " is not below 1");
  }
}

}  // namespace

double loop_mass_exact(const Graph& g) {
  const Matrix p = transition_matrix(g);
  require_transient(p);
  const LogDeterminant ld = log_determinant(Matrix::Identity(p.rows(), p.cols()) - p);
  if (ld.sign <= 0) throw NumericalError("loop_mass_exact: det(I - P) is not positive");
  return -ld.log_abs;
}

TruncatedLoopMass loop_mass_truncated(const Graph& g, int max_len) {
  if (max_len < 1) throw InvalidArgument("loop_mass_truncated: max_len must be >= 1");
  const Matrix p = transition_matrix(g);
  const double rho = spectral_radius_bound(p);
  if (rho >= 1.0 - 1e-12) {
    throw NumericalError("non-transient walk: certified spectral radius bound is not below 1");
  }
  TruncatedLoopMass result;
  result.spectral_radius = rho;
  result.terms.reserve(static_cast<std::size_t>(max_len));
  Matrix power = p;
  CompensatedSum sum;
  for (int k = 1; k <= max_len; ++k) {
    if (k > 1) power = power * p;
    const double term = power.trace() / k;
    result.terms.push_back(term);
    sum.add(term);
  }
  result.mass = sum.value();
  const double n = static_cast<double>(p.rows());
  const double next = static_cast<double>(max_len) + 1.0;
  result.tail_bound = n * std::exp(next * std::log(rho)) / (next * (1.0 - rho));
  return result;
}

double penalized_loop_mass(const Graph& g, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("penalized_loop_mass: alpha must lie in (0, 1)");
  const Matrix p = transition_matrix(g);
  const LogDeterminant ld = log_determinant(Matrix::Identity(p.rows(), p.cols()) - alpha * p);
  if (ld.sign <= 0) throw NumericalError("penalized_loop_mass: det(I - alpha P) is not positive");
  return -ld.log_abs;
}

double penalized_mass_limit(const Graph& g) {
  if (g.is_killed()) throw InvalidArgument("penalized_mass_limit: graph must be closed");
  if (!g.is_connected()) throw InvalidArgument("penalized_mass_limit: graph must be connected");
  // f(eps) = -log det(I - (1 - eps) P) + log eps = f0 + f1 eps + f2 eps^2 + ...
  constexpr double kEps = 1e-4;
  std::vector<double> values;
  for (int i = 0; i < 3; ++i) {
    const double eps = kEps / std::pow(2.0, i);
    values.push_back(penalized_loop_mass(g, 1.0 - eps) + std::log(eps));
  }
  return richardson_extrapolate(values, 2.0, 1.0, 1.0);
}

double log_det_prime_rw(const Graph& g) {
  if (g.is_killed()) throw InvalidArgument("log_det_prime_rw: graph must be closed");
  const Matrix lap = graph_laplacian(g);
  const Eigen::Index n = lap.rows();
  Vector inv_sqrt_degree(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g.degree(static_cast<int>(i)) == 0) throw InvalidArgument("undefined transition: isolated vertex");
    inv_sqrt_degree[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<int>(i))));
  }
  const Matrix normalized = inv_sqrt_degree.asDiagonal() * lap * inv_sqrt_degree.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized, Eigen::EigenvaluesOnly);
  Vector values = eig.eigenvalues();  // ascending; values[0] is the zero mode
  double sum = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) sum += std::log(values[i]);
  return -sum;
}

std::uint64_t spanning_tree_count(const Graph& g, int removed) {
  if (removed < 0 || removed >= g.vertex_count()) {
    throw InvalidArgument("spanning_tree_count: removed vertex out of range");
  }
  if (!g.is_connected()) return 0;
  const int n = g.vertex_count();
  if (n == 1) return 1;
  const Matrix lap = graph_laplacian(g);
  Matrix minor(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == removed) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == removed) continue;
      minor(r, c++) = lap(i, j);
    }
    ++r;
  }
  const double det = determinant(minor);
  const double rounded = std::round(det);
  if (std::abs(det - rounded) > std::max(1e-6, 1e-12 * std::abs(det))) {
    throw NumericalError("spanning_tree_count: minor determinant is not integral");
  }
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace loopzeta
