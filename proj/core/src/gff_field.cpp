#include "loopzeta/gff_field.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/random.hpp"

namespace loopzeta {

namespace {

constexpr int kMaxLevel = 13;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int level_of(int size, int min_level) {
  if (size <= 0 || !std::has_single_bit(static_cast<unsigned>(size))) {
    throw InvalidArgument("grid size must be a power of two (got " + std::to_string(size) + ")");
  }
  const int k = std::countr_zero(static_cast<unsigned>(size));
  if (k < min_level || k > kMaxLevel) {
    throw InvalidArgument("grid size out of range: 2^" + std::to_string(k) + " not in [2^" +
                          std::to_string(min_level) + ", 2^" + std::to_string(kMaxLevel) + "]");
  }
  return k;
}

// In-place 2-D type-I sine transform (unnormalized, FFTW RODFT00) of an n x n
// row-major array.
void sine_transform(std::vector<double>& data, int n) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_2d(n, n, data.data(), data.data(), FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("sine transform plan failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// Eigenvalues 4 sin^2(pi m / 2N) of the 1-D Dirichlet path Laplacian, m = 1..N-1.
std::vector<double> path_spectrum(int cells) {
  std::vector<double> out(static_cast<std::size_t>(cells - 1));
  for (int m = 1; m < cells; ++m) {
    const double s = std::sin(kPi * m / (2.0 * cells));
    out[static_cast<std::size_t>(m - 1)] = 4.0 * s * s;
  }
  return out;
}

}  // namespace

double DyadicSquare::side() const { return std::ldexp(1.0, -level); }

void DyadicSquare::validate() const {
  if (level < 0 || level > 62) throw InvalidArgument("dyadic square level out of range");
  const std::int64_t n = std::int64_t{1} << level;
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("dyadic square index out of range");
}

DyadicSquare DyadicSquare::child(int quadrant) const {
  return {level + 1, 2 * i + (quadrant & 1), 2 * j + ((quadrant >> 1) & 1)};
}

DyadicSquare DyadicSquare::parent() const {
  if (level == 0) throw InvalidArgument("the unit square has no parent");
  return {level - 1, i >> 1, j >> 1};
}

bool DyadicSquare::contains(const DyadicSquare& other) const {
  if (other.level < level) return false;
  const int shift = other.level - level;
  return (other.i >> shift) == i && (other.j >> shift) == j;
}

GridField::GridField(int level, std::vector<double> vertex_values, std::uint64_t seed)
    : level_(level), seed_(seed), values_(std::move(vertex_values)) {
  if (level_ < 1 || level_ > kMaxLevel) throw InvalidArgument("grid level out of range");
  const int n = size();
  const auto stride = static_cast<std::size_t>(n + 1);
  if (values_.size() != stride * stride) throw InvalidArgument("grid field: wrong number of vertex values");
  for (int t = 0; t <= n; ++t) {
    if (vertex(0, t) != 0.0 || vertex(n, t) != 0.0 || vertex(t, 0) != 0.0 || vertex(t, n) != 0.0) {
      throw InvalidArgument("grid field must vanish on the boundary");
    }
  }
  prefix_.assign(stride * stride, 0.0);
  for (int r = 0; r < n; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < n; ++c) {
      row_sum += cell(r, c);
      prefix_[(r + 1) * stride + c + 1] = prefix_[r * stride + c + 1] + row_sum;
    }
  }
}

GridField GridField::from_interior(int level, std::span<const double> interior, std::uint64_t seed) {
  if (level < 1 || level > kMaxLevel) throw InvalidArgument("grid level out of range");
  const int n = 1 << level;
  const auto m = static_cast<std::size_t>(n - 1);
  if (interior.size() != m * m) throw InvalidArgument("grid field: wrong number of interior values");
  const auto stride = static_cast<std::size_t>(n + 1);
  std::vector<double> values(stride * stride, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    std::memcpy(&values[(r + 1) * stride + 1], &interior[r * m], m * sizeof(double));
  }
  return GridField(level, std::move(values), seed);
}

double GridField::vertex(int row, int col) const {
  return values_[static_cast<std::size_t>(row) * static_cast<std::size_t>(size() + 1) +
                 static_cast<std::size_t>(col)];
}

std::vector<double> GridField::interior_values() const {
  const int n = size();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n - 1));
  for (int r = 1; r < n; ++r) {
    for (int c = 1; c < n; ++c) out.push_back(vertex(r, c));
  }
  return out;
}

double GridField::cell(int row, int col) const {
  return 0.25 * (vertex(row, col) + vertex(row, col + 1) + vertex(row + 1, col) + vertex(row + 1, col + 1));
}

double GridField::block_average(int r0, int r1, int c0, int c1) const {
  const auto stride = static_cast<std::size_t>(size() + 1);
  auto p = [&](int r, int c) { return prefix_[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c)]; };
  const double sum = p(r1, c1) - p(r0, c1) - p(r1, c0) + p(r0, c0);
  return sum / (static_cast<double>(r1 - r0) * (c1 - c0));
}

double GridField::dirichlet_energy() const {
  const int n = size();
  double total = 0.0;
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      if (c < n) total += std::pow(vertex(r, c + 1) - vertex(r, c), 2);
      if (r < n) total += std::pow(vertex(r + 1, c) - vertex(r, c), 2);
    }
  }
  return total / normalization();
}

GridField sample_dgff(int size, std::uint64_t seed) { return sample_dgff(size, seed, 0); }

GridField sample_dgff(int size, std::uint64_t seed, std::uint64_t stream_id) {
  const int k = level_of(size, 4);
  const int m = size - 1;
  const auto lambda = path_spectrum(size);
  RandomStream rng(seed, stream_id);
  std::vector<double> coeff(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double eig = lambda[static_cast<std::size_t>(a)] + lambda[static_cast<std::size_t>(b)];
      coeff[static_cast<std::size_t>(a) * m + b] = rng.normal() * std::sqrt(GridField::normalization() / eig);
    }
  }
  sine_transform(coeff, m);
  // Orthonormal eigenvectors are (2/N) sin sin; RODFT00 carries a factor 4.
  const double scale = 1.0 / (2.0 * size);
  for (double& v : coeff) v *= scale;
  return GridField::from_interior(k, coeff, seed);
}

double square_average(const GridField& field, const DyadicSquare& square) {
  square.validate();
  if (square.level > field.level()) throw NumericalError("resolution exhausted");
  const int span = 1 << (field.level() - square.level);
  const int c0 = static_cast<int>(square.i) * span;
  const int r0 = static_cast<int>(square.j) * span;
  return field.block_average(r0, r0 + span, c0, c0 + span);
}

std::vector<double> solve_dirichlet_laplacian(int size, std::span<const double> rhs) {
  level_of(size, 1);
  const int m = size - 1;
  if (rhs.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw InvalidArgument("solve_dirichlet_laplacian: wrong right-hand side length");
  }
  if (m == 0) return {};
  const auto lambda = path_spectrum(size);
  std::vector<double> work(rhs.begin(), rhs.end());
  sine_transform(work, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      work[static_cast<std::size_t>(a) * m + b] /= lambda[static_cast<std::size_t>(a)] + lambda[static_cast<std::size_t>(b)];
    }
  }
  sine_transform(work, m);
  const double scale = 1.0 / (4.0 * size * size);
  for (double& v : work) v *= scale;
  return work;
}

Matrix dirichlet_laplacian_matrix(int size) {
  level_of(size, 1);
  if (size > 32) throw InvalidArgument("dense grid Laplacian limited to size <= 32");
  const int m = size - 1;
  Matrix l = Matrix::Zero(m * m, m * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const int p = r * m + c;
      l(p, p) = 4.0;
      if (c + 1 < m) l(p, p + 1) = l(p + 1, p) = -1.0;
      if (r + 1 < m) l(p, p + m) = l(p + m, p) = -1.0;
    }
  }
  return l;
}

Matrix green_oracle(int size) {
  const Matrix l = dirichlet_laplacian_matrix(size);
  return GridField::normalization() * l.ldlt().solve(Matrix::Identity(l.rows(), l.cols()));
}

void write_field(std::ostream& out, const GridField& field) {
  static_assert(std::endian::native == std::endian::little, "field dump assumes a little-endian host");
  const auto level = static_cast<std::uint32_t>(field.level());
  const std::uint64_t seed = field.seed();
  out.write("LZGF", 4);
  out.write(reinterpret_cast<const char*>(&level), sizeof level);
  out.write(reinterpret_cast<const char*>(&seed), sizeof seed);
  const auto& v = field.vertex_values();
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw NumericalError("field dump: write failed");
}

GridField read_field(std::istream& in) {
  char magic[4];
  std::uint32_t level = 0;
  std::uint64_t seed = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&level), sizeof level);
  in.read(reinterpret_cast<char*>(&seed), sizeof seed);
  if (!in || std::memcmp(magic, "LZGF", 4) != 0) throw InvalidArgument("not a field dump");
  if (level < 1 || level > static_cast<std::uint32_t>(kMaxLevel)) throw InvalidArgument("field dump: bad level");
  const auto stride = (std::size_t{1} << level) + 1;
  std::vector<double> values(stride * stride);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw InvalidArgument("field dump: truncated");
  return GridField(static_cast<int>(level), std::move(values), seed);
}

}  // namespace loopzeta
