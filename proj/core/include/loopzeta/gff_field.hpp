#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "loopzeta/constants.hpp"
#include "loopzeta/linalg.hpp"

namespace loopzeta {

/// Dyadic square [i 2^-level, (i+1) 2^-level] x [j 2^-level, (j+1) 2^-level]
/// of the unit square; i runs along x, j along y.
struct DyadicSquare {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  double side() const;
  /// Throws InvalidArgument unless 0 <= i, j < 2^level.
  void validate() const;
  DyadicSquare child(int quadrant) const;  // quadrant bit 0: x, bit 1: y
  DyadicSquare parent() const;
  bool contains(const DyadicSquare& other) const;

  friend bool operator==(const DyadicSquare&, const DyadicSquare&) = default;
  friend auto operator<=>(const DyadicSquare&, const DyadicSquare&) = default;
};

/// Field on the vertices of the (2^k + 1) x (2^k + 1) grid covering the unit
/// square with mesh 2^-k, zero on the outer ring (Dirichlet).
///
/// Each of the 4^k cells carries the mean of its four corners; square
/// averages are means of cell values, read off 2-D prefix sums in O(1).
/// Immutable after construction.
class GridField {
 public:
  /// `vertex_values` is row-major over (2^k + 1)^2 vertices (row = y index).
  /// Boundary entries must be zero.
  GridField(int level, std::vector<double> vertex_values, std::uint64_t seed = 0);

  /// Field with the given interior vertex values, row-major over (2^k - 1)^2.
  static GridField from_interior(int level, std::span<const double> interior, std::uint64_t seed = 0);

  int level() const { return level_; }
  /// Cells per side, 2^k.
  int size() const { return 1 << level_; }
  std::uint64_t seed() const { return seed_; }

  /// Covariance of a sampled field is normalization() times the inverse grid
  /// Laplacian: coefficients in the (2 pi)^-1-normalized Dirichlet basis are
  /// unit Gaussians.
  static constexpr double normalization() { return 2.0 * kPi; }

  double vertex(int row, int col) const;
  const std::vector<double>& vertex_values() const { return values_; }
  /// Interior vertex values, row-major over (2^k - 1)^2.
  std::vector<double> interior_values() const;

  double cell(int row, int col) const;

  /// Mean of the cell values over cells with rows [r0, r1) and cols [c0, c1).
  double block_average(int r0, int r1, int c0, int c1) const;

  /// (2 pi)^-1 sum over grid edges of squared differences.
  double dirichlet_energy() const;

 private:
  int level_;
  std::uint64_t seed_;
  std::vector<double> values_;  // (2^k + 1)^2
  std::vector<double> prefix_;  // (2^k + 1)^2, prefix_[r][c] = sum of cells above-left
};

/// Discrete Gaussian free field with Dirichlet boundary on the 2^k grid,
/// sampled through the sine eigenbasis. size = 2^k with k in [4, 13].
GridField sample_dgff(int size, std::uint64_t seed);

/// Same as sample_dgff, drawing from stream `stream_id` of the seed.
GridField sample_dgff(int size, std::uint64_t seed, std::uint64_t stream_id);

/// h_S: mean of the field over the cells of `square`. Throws NumericalError
/// ("resolution exhausted") when the square is finer than one cell.
double square_average(const GridField& field, const DyadicSquare& square);

/// Solves L u = rhs for the Dirichlet grid Laplacian (4 on the diagonal,
/// -1 per interior neighbour) on the (size - 1)^2 interior vertices, via
/// the type-I sine transform. Row-major vectors.
std::vector<double> solve_dirichlet_laplacian(int size, std::span<const double> rhs);

/// Dense Dirichlet grid Laplacian on the interior vertices (size <= 32).
Matrix dirichlet_laplacian_matrix(int size);

/// normalization() * L^-1 as a dense matrix; refuses size > 32.
Matrix green_oracle(int size);

/// Binary dump: "LZGF", uint32 k, uint64 seed, then (2^k + 1)^2 little-endian
/// float64 vertex values, row-major.
void write_field(std::ostream& out, const GridField& field);
GridField read_field(std::istream& in);

}  // namespace loopzeta
