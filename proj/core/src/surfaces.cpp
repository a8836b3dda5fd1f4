#include "loopzeta/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"

namespace loopzeta {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string("surface: ") + what + " must be positive");
}

double parse_length(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("surface: cannot parse length '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("surface: cannot parse length '" + s + "'");
  return v;
}

std::pair<double, double> parse_pair(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw InvalidArgument("surface: expected AxB, got '" + s + "'");
  return {parse_length(s.substr(0, x)), parse_length(s.substr(x + 1))};
}

// Sorts, merges values equal up to rounding, and checks the budget.
std::vector<EigenPair> merge_sorted(std::vector<EigenPair> raw) {
  std::sort(raw.begin(), raw.end(), [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
  std::vector<EigenPair> out;
  for (const EigenPair& p : raw) {
    if (!out.empty() && std::abs(p.value - out.back().value) <= 1e-13 * std::max(1.0, p.value)) {
      out.back().multiplicity += p.multiplicity;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<EigenPair> lattice_pairs(double alpha, double beta, double cutoff, bool full_lattice) {
  // lambda = alpha m^2 + beta n^2 over Z^2 (torus) or m, n >= 1 (rectangle).
  std::vector<EigenPair> raw;
  const long long m_max = static_cast<long long>(std::floor(std::sqrt(cutoff / alpha)));
  const long long m_min = full_lattice ? 0 : 1;
  for (long long m = m_min; m <= m_max; ++m) {
    const double rest = cutoff - alpha * static_cast<double>(m * m);
    if (rest < 0.0) break;
    const long long n_max = static_cast<long long>(std::floor(std::sqrt(rest / beta)));
    for (long long n = m_min; n <= n_max; ++n) {
      const double value = alpha * static_cast<double>(m * m) + beta * static_cast<double>(n * n);
      if (value > cutoff) break;
      long long mult = 1;
      if (full_lattice) mult = (m == 0 ? 1 : 2) * (n == 0 ? 1 : 2);
      raw.push_back({value, mult});
    }
  }
  return raw;
}

std::vector<EigenPair> disk_pairs(double radius, double cutoff) {
  const double j_max = radius * std::sqrt(cutoff);
  std::vector<EigenPair> raw;
  std::vector<double> zeros;
  for (int nu = 0;; ++nu) {
    const double order = nu;
    int next = 1;
    bool any = false;
    while (true) {
      // Rough count of zeros of J_nu below j_max (uniform asymptotics), plus slack.
      int batch = 8;
      if (j_max > order) {
        const double est =
            (std::sqrt(j_max * j_max - order * order) - order * std::acos(order / j_max)) / kPi;
        batch = std::max(8, static_cast<int>(est) + 4 - (next - 1));
      }
      zeros.assign(static_cast<std::size_t>(batch), 0.0);
      boost::math::cyl_bessel_j_zero(order, next, static_cast<unsigned>(batch), zeros.begin());
      bool done = false;
      for (double j : zeros) {
        if (j > j_max) {
          done = true;
          break;
        }
        raw.push_back({(j / radius) * (j / radius), nu == 0 ? 1 : 2});
        any = true;
      }
      if (done) break;
      next += batch;
    }
    if (!any) break;
  }
  return raw;
}

}  // namespace

ModelSurface::ModelSurface(Variant v) : variant_(std::move(v)) {
  std::visit(Overloaded{
                 [](const IntervalDirichlet& s) { require_positive(s.length, "interval length"); },
                 [](const RectangleDirichlet& s) {
                   require_positive(s.a, "rectangle side");
                   require_positive(s.b, "rectangle side");
                 },
                 [](const FlatTorus& s) {
                   require_positive(s.a, "torus side");
                   require_positive(s.b, "torus side");
                 },
                 [](const RoundSphere& s) { require_positive(s.radius, "sphere radius"); },
                 [](const DiskDirichlet& s) { require_positive(s.radius, "disk radius"); },
             },
             variant_);
}

ModelSurface ModelSurface::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("surface: expected kind:size, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string size = text.substr(colon + 1);
  if (kind == "interval") return ModelSurface(IntervalDirichlet{parse_length(size)});
  if (kind == "rect" || kind == "rectangle") {
    const auto [a, b] = parse_pair(size);
    return ModelSurface(RectangleDirichlet{a, b});
  }
  if (kind == "torus") {
    const auto [a, b] = parse_pair(size);
    return ModelSurface(FlatTorus{a, b});
  }
  if (kind == "sphere") return ModelSurface(RoundSphere{parse_length(size)});
  if (kind == "disk") return ModelSurface(DiskDirichlet{parse_length(size)});
  throw InvalidArgument("surface: unknown kind '" + kind + "'");
}

std::string ModelSurface::to_string() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const IntervalDirichlet& s) { out << "interval:" << s.length; },
                 [&](const RectangleDirichlet& s) { out << "rect:" << s.a << 'x' << s.b; },
                 [&](const FlatTorus& s) { out << "torus:" << s.a << 'x' << s.b; },
                 [&](const RoundSphere& s) { out << "sphere:" << s.radius; },
                 [&](const DiskDirichlet& s) { out << "disk:" << s.radius; },
             },
             variant_);
  return out.str();
}

SurfaceKind ModelSurface::kind() const {
  return static_cast<SurfaceKind>(variant_.index());
}

double ModelSurface::volume() const {
  return std::visit(Overloaded{
                        [](const IntervalDirichlet& s) { return s.length; },
                        [](const RectangleDirichlet& s) { return s.a * s.b; },
                        [](const FlatTorus& s) { return s.a * s.b; },
                        [](const RoundSphere& s) { return 4.0 * kPi * s.radius * s.radius; },
                        [](const DiskDirichlet& s) { return kPi * s.radius * s.radius; },
                    },
                    variant_);
}

double ModelSurface::boundary_length() const {
  return std::visit(Overloaded{
                        [](const IntervalDirichlet&) { return 0.0; },
                        [](const RectangleDirichlet& s) { return 2.0 * (s.a + s.b); },
                        [](const FlatTorus&) { return 0.0; },
                        [](const RoundSphere&) { return 0.0; },
                        [](const DiskDirichlet& s) { return 2.0 * kPi * s.radius; },
                    },
                    variant_);
}

int ModelSurface::euler_characteristic() const {
  switch (kind()) {
    case SurfaceKind::Torus:
      return 0;
    case SurfaceKind::Sphere:
      return 2;
    default:
      return 1;
  }
}

bool ModelSurface::is_closed() const {
  return kind() == SurfaceKind::Torus || kind() == SurfaceKind::Sphere;
}

HeatCoefficients ModelSurface::heat_coefficients() const {
  return std::visit(Overloaded{
                        [](const IntervalDirichlet& s) {
                          return HeatCoefficients{0.0, s.length / (2.0 * kSqrtPi), -0.5};
                        },
                        // Exact product of two interval traces; the corners give 1/4.
                        [](const RectangleDirichlet& s) {
                          return HeatCoefficients{s.a * s.b / (4.0 * kPi), -(s.a + s.b) / (4.0 * kSqrtPi), 0.25};
                        },
                        [](const FlatTorus& s) { return HeatCoefficients{s.a * s.b / (4.0 * kPi), 0.0, 0.0}; },
                        [](const RoundSphere& s) { return HeatCoefficients{s.radius * s.radius, 0.0, 1.0 / 3.0}; },
                        [](const DiskDirichlet& s) {
                          return HeatCoefficients{s.radius * s.radius / 4.0, -kSqrtPi * s.radius / 4.0, 1.0 / 6.0};
                        },
                    },
                    variant_);
}

ModelSurface ModelSurface::scaled(double factor) const {
  require_positive(factor, "scale factor");
  return std::visit(Overloaded{
                        [&](const IntervalDirichlet& s) { return ModelSurface(IntervalDirichlet{s.length * factor}); },
                        [&](const RectangleDirichlet& s) {
                          return ModelSurface(RectangleDirichlet{s.a * factor, s.b * factor});
                        },
                        [&](const FlatTorus& s) { return ModelSurface(FlatTorus{s.a * factor, s.b * factor}); },
                        [&](const RoundSphere& s) { return ModelSurface(RoundSphere{s.radius * factor}); },
                        [&](const DiskDirichlet& s) { return ModelSurface(DiskDirichlet{s.radius * factor}); },
                    },
                    variant_);
}

long long EigenStream::count() const {
  long long total = 0;
  for (const EigenPair& p : pairs) total += p.multiplicity;
  return total;
}

double weyl_count_upper(const ModelSurface& surface, double lambda) {
  if (lambda < 0.0) return 0.0;
  const double root = std::sqrt(lambda);
  return std::visit(Overloaded{
                        [&](const IntervalDirichlet& s) { return s.length * root / kPi; },
                        [&](const RectangleDirichlet& s) { return s.a * s.b * lambda / (4.0 * kPi); },
                        [&](const FlatTorus& s) {
                          return s.a * s.b * lambda / (4.0 * kPi) + (s.a + s.b) * root / 2.0 + 4.0;
                        },
                        [&](const RoundSphere& s) {
                          return s.radius * s.radius * lambda + s.radius * root + 1.0;
                        },
                        // Polya's inequality holds for the disk.
                        [&](const DiskDirichlet& s) { return s.radius * s.radius * lambda / 4.0; },
                    },
                    surface.variant());
}

EigenStream eigenvalues(const ModelSurface& surface, double cutoff, std::size_t budget) {
  if (!(cutoff > 0.0)) throw InvalidArgument("eigenvalues: cutoff must be positive");
  const double needed = weyl_count_upper(surface, cutoff);
  if (needed > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "eigenvalues: cutoff " << cutoff << " needs about " << static_cast<long long>(needed)
        << " eigenvalues, budget is " << budget;
    throw InvalidArgument(msg.str());
  }
  EigenStream out;
  out.cutoff = cutoff;
  std::vector<EigenPair> raw = std::visit(
      Overloaded{
          [&](const IntervalDirichlet& s) {
            std::vector<EigenPair> v;
            for (long long n = 1;; ++n) {
              const double value = std::pow(static_cast<double>(n) * kPi / s.length, 2);
              if (value > cutoff) break;
              v.push_back({value, 1});
            }
            return v;
          },
          [&](const RectangleDirichlet& s) {
            return lattice_pairs(kPi * kPi / (s.a * s.a), kPi * kPi / (s.b * s.b), cutoff, false);
          },
          [&](const FlatTorus& s) {
            return lattice_pairs(4.0 * kPi * kPi / (s.a * s.a), 4.0 * kPi * kPi / (s.b * s.b), cutoff, true);
          },
          [&](const RoundSphere& s) {
            std::vector<EigenPair> v;
            for (long long l = 0;; ++l) {
              const double value = static_cast<double>(l * (l + 1)) / (s.radius * s.radius);
              if (value > cutoff) break;
              v.push_back({value, 2 * l + 1});
            }
            return v;
          },
          [&](const DiskDirichlet& s) { return disk_pairs(s.radius, cutoff); },
      },
      surface.variant());
  out.pairs = merge_sorted(std::move(raw));
  return out;
}

EigenPair spectral_gap(const ModelSurface& surface) {
  return std::visit(
      Overloaded{
          [](const IntervalDirichlet& s) { return EigenPair{std::pow(kPi / s.length, 2), 1}; },
          [](const RectangleDirichlet& s) {
            return EigenPair{kPi * kPi * (1.0 / (s.a * s.a) + 1.0 / (s.b * s.b)), 1};
          },
          [](const FlatTorus& s) {
            const double longest = std::max(s.a, s.b);
            return EigenPair{4.0 * kPi * kPi / (longest * longest), s.a == s.b ? 4 : 2};
          },
          [](const RoundSphere& s) { return EigenPair{2.0 / (s.radius * s.radius), 3}; },
          [](const DiskDirichlet& s) {
            const double j = boost::math::cyl_bessel_j_zero(0.0, 1);
            return EigenPair{(j / s.radius) * (j / s.radius), 1};
          },
      },
      surface.variant());
}

}  // namespace loopzeta
