#pragma once

#include <span>
#include <vector>

namespace loopzeta {

/// n_x by n_y periodic square lattice.
struct TorusLatticeSpec {
  int n_x = 0;
  int n_y = 0;

  double aspect() const { return static_cast<double>(n_y) / n_x; }
  /// Throws InvalidArgument unless n_x, n_y >= 4.
  void validate() const;
};

/// log det' of the graph Laplacian of the n_x by n_y discrete torus:
/// sum over (j, k) != (0, 0) of log(4 - 2 cos(2 pi j / n_x) - 2 cos(2 pi k / n_y)).
/// Accepts any n_x, n_y >= 1 (the 2 x 2 torus is a multigraph).
double torus_log_det_prime(int n_x, int n_y);

/// Validated form of torus_log_det_prime.
double discrete_torus_log_det(const TorusLatticeSpec& spec);

/// c_N = log det' - (4G/pi) n_x n_y - log(n_x n_y).
double lattice_constant(const TorusLatticeSpec& spec);

struct ConstantTermReport {
  std::vector<TorusLatticeSpec> sizes;
  std::vector<double> log_dets;
  std::vector<double> constants;  // c_N per size
  double limit = 0.0;             // Richardson limit, error expansion in N^{-2}
  double cauchy_gap = 0.0;        // |c_last - c_previous|
  bool flagged = false;           // cauchy_gap > 1e-2
};

/// Constant-order term of the discrete log-determinant along a sequence of
/// lattices with fixed aspect, each twice as large as the previous one.
/// Needs at least 4 sizes.
ConstantTermReport constant_term(std::span<const TorusLatticeSpec> sizes);

/// Convenience: sizes n, 2n, 4n, ... (count of them) with n_y = aspect * n_x.
std::vector<TorusLatticeSpec> doubling_sequence(int first_n, int aspect, int count);

}  // namespace loopzeta
