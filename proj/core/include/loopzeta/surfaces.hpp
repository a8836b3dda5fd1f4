#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace loopzeta {

struct IntervalDirichlet {
  double length = 1.0;
};
struct RectangleDirichlet {
  double a = 1.0;
  double b = 1.0;
};
/// Flat torus R^2 / (a Z x b Z).
struct FlatTorus {
  double a = 1.0;
  double b = 1.0;
};
struct RoundSphere {
  double radius = 1.0;
};
struct DiskDirichlet {
  double radius = 1.0;
};

enum class SurfaceKind { Interval, Rectangle, Torus, Sphere, Disk };

/// Coefficients of the small-t expansion tr e^{-t Delta} ~ a/t + b/sqrt(t) + c.
struct HeatCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

class ModelSurface {
 public:
  using Variant = std::variant<IntervalDirichlet, RectangleDirichlet, FlatTorus, RoundSphere, DiskDirichlet>;

  ModelSurface(Variant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires std::is_constructible_v<Variant, T>
  ModelSurface(T v) : ModelSurface(Variant(std::move(v))) {}  // NOLINT(google-explicit-constructor)

  /// "interval:1", "rect:1x2", "torus:1x1", "sphere:1", "disk:1".
  static ModelSurface parse(const std::string& text);
  std::string to_string() const;

  const Variant& variant() const { return variant_; }
  SurfaceKind kind() const;

  double volume() const;
  /// Boundary length; 0 for the interval by convention (its endpoints carry no length).
  double boundary_length() const;
  int euler_characteristic() const;
  bool is_closed() const;
  bool has_boundary() const { return !is_closed(); }
  /// Multiplicity of the zero eigenvalue (1 for closed surfaces, else 0).
  int zero_modes() const { return is_closed() ? 1 : 0; }
  HeatCoefficients heat_coefficients() const;

  /// Same surface with every length multiplied by `factor` (eigenvalues scale by factor^-2).
  ModelSurface scaled(double factor) const;

 private:
  Variant variant_;
};

struct EigenPair {
  double value = 0.0;
  long long multiplicity = 0;
};

/// All eigenvalues not exceeding `cutoff`, sorted ascending, equal values merged.
struct EigenStream {
  double cutoff = 0.0;
  std::vector<EigenPair> pairs;

  /// Total count including multiplicity.
  long long count() const;
};

inline constexpr std::size_t kDefaultEigenBudget = 20'000'000;

/// Enumerates the spectrum up to `cutoff`. Disk eigenvalues are squared
/// Bessel zeros (j_{nu,k}/R)^2, multiplicity 2 for nu >= 1. Throws
/// InvalidArgument when the enumeration would exceed `budget` pairs.
EigenStream eigenvalues(const ModelSurface& surface, double cutoff,
                        std::size_t budget = kDefaultEigenBudget);

/// Upper bound on the eigenvalue count N(lambda) (including zero modes), used
/// for certified tail bounds of eigen-sums.
double weyl_count_upper(const ModelSurface& surface, double lambda);

/// Smallest non-zero eigenvalue and its multiplicity.
EigenPair spectral_gap(const ModelSurface& surface);

}  // namespace loopzeta
