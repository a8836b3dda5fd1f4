#include <gtest/gtest.h>

#include <cmath>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/heat_trace.hpp"
#include "loopzeta/stats.hpp"
#include "loopzeta/surfaces.hpp"
#include "oracles.hpp"

using namespace loopzeta;

namespace {

const std::vector<std::string>& all_surfaces() {
  static const std::vector<std::string> s{"interval:1", "rect:1x2", "torus:1x1", "sphere:1", "disk:1"};
  return s;
}

}  // namespace

TEST(ModelSurface, GeometricInvariants) {
  struct Row {
    const char* spec;
    double vol, len;
    int chi;
    bool closed;
  };
  const Row rows[] = {
      {"interval:2", 2.0, 0.0, 1, false},
      {"rect:1x2", 2.0, 6.0, 1, false},
      {"torus:1x3", 3.0, 0.0, 0, true},
      {"sphere:2", 16.0 * kPi, 0.0, 2, true},
      {"disk:2", 4.0 * kPi, 4.0 * kPi, 1, false},
  };
  for (const auto& r : rows) {
    const ModelSurface s = ModelSurface::parse(r.spec);
    EXPECT_DOUBLE_EQ(s.volume(), r.vol) << r.spec;
    EXPECT_DOUBLE_EQ(s.boundary_length(), r.len) << r.spec;
    EXPECT_EQ(s.euler_characteristic(), r.chi) << r.spec;
    EXPECT_EQ(s.is_closed(), r.closed) << r.spec;
    EXPECT_EQ(s.zero_modes(), r.closed ? 1 : 0) << r.spec;
  }
}

TEST(ModelSurface, HeatCoefficients) {
  const double sp = std::sqrt(kPi);
  auto check = [](const char* spec, double a, double b, double c) {
    const HeatCoefficients h = ModelSurface::parse(spec).heat_coefficients();
    EXPECT_NEAR(h.a, a, 1e-15) << spec;
    EXPECT_NEAR(h.b, b, 1e-15) << spec;
    EXPECT_NEAR(h.c, c, 1e-15) << spec;
  };
  check("interval:3", 0.0, 3.0 / (2 * sp), -0.5);
  check("rect:1x2", 2.0 / (4 * kPi), -3.0 / (4 * sp), 0.25);
  check("torus:2x1", 2.0 / (4 * kPi), 0.0, 0.0);
  check("sphere:1", 1.0, 0.0, 1.0 / 3.0);
  check("disk:1", 0.25, -2 * kPi / (8 * sp), 1.0 / 6.0);
}

TEST(ModelSurface, ParseRoundTripAndErrors) {
  for (const auto& s : all_surfaces()) {
    EXPECT_EQ(ModelSurface::parse(ModelSurface::parse(s).to_string()).to_string(), ModelSurface::parse(s).to_string());
  }
  EXPECT_THROW(ModelSurface::parse("blob:1"), InvalidArgument);
  EXPECT_THROW(ModelSurface::parse("disk:-1"), InvalidArgument);
  EXPECT_THROW(ModelSurface::parse("rect:1"), InvalidArgument);
}

TEST(Eigenvalues, IntervalOfLengthPi) {
  const EigenStream e = eigenvalues(IntervalDirichlet{kPi}, 10.0);
  ASSERT_EQ(e.pairs.size(), 3u);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_NEAR(e.pairs[n - 1].value, n * n, 1e-12);
    EXPECT_EQ(e.pairs[n - 1].multiplicity, 1);
  }
}

TEST(Eigenvalues, UnitSphere) {
  const EigenStream e = eigenvalues(RoundSphere{1.0}, 7.0);
  ASSERT_EQ(e.pairs.size(), 3u);
  const double v[] = {0, 2, 6};
  const long long m[] = {1, 3, 5};
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(e.pairs[i].value, v[i]);
    EXPECT_EQ(e.pairs[i].multiplicity, m[i]);
  }
}

TEST(Eigenvalues, DiskGroundStateIsFirstBesselZero) {
  const double j01 = oracle::bisect(oracle::bessel_j0_series, 2.0, 3.0);
  const EigenStream e = eigenvalues(DiskDirichlet{1.0}, 10.0);
  ASSERT_FALSE(e.pairs.empty());
  EXPECT_NEAR(e.pairs.front().value, j01 * j01, 1e-11);
  EXPECT_EQ(e.pairs.front().multiplicity, 1);
  // Higher zeros of J_0 against the same oracle.
  const EigenStream big = eigenvalues(DiskDirichlet{1.0}, 400.0);
  int found = 0;
  for (double lo = 5.0; lo < 19.0; lo += 0.5) {
    if ((oracle::bessel_j0_series(lo) < 0) == (oracle::bessel_j0_series(lo + 0.5) < 0)) continue;
    const double j = oracle::bisect(oracle::bessel_j0_series, lo, lo + 0.5);
    bool matched = false;
    for (const auto& p : big.pairs) matched = matched || std::abs(p.value - j * j) < 1e-9 * j * j;
    EXPECT_TRUE(matched) << j;
    ++found;
  }
  EXPECT_EQ(found, 5);
}

TEST(Eigenvalues, TorusIncludesZeroAndLatticeMultiplicities) {
  const EigenStream e = eigenvalues(FlatTorus{1.0, 1.0}, 4 * kPi * kPi * 1.5);
  ASSERT_GE(e.pairs.size(), 2u);
  EXPECT_EQ(e.pairs[0].value, 0.0);
  EXPECT_EQ(e.pairs[0].multiplicity, 1);
  EXPECT_NEAR(e.pairs[1].value, 4 * kPi * kPi, 1e-10);
  EXPECT_EQ(e.pairs[1].multiplicity, 4);
}

TEST(Eigenvalues, StreamRespectsCutoffAndIsSorted) {
  for (const auto& spec : all_surfaces()) {
    const EigenStream e = eigenvalues(ModelSurface::parse(spec), 500.0);
    for (std::size_t i = 0; i < e.pairs.size(); ++i) {
      EXPECT_LE(e.pairs[i].value, 500.0);
      if (i > 0) {
        EXPECT_LT(e.pairs[i - 1].value, e.pairs[i].value);
      }
    }
  }
}

TEST(Eigenvalues, WeylLaw) {
  for (const char* spec : {"rect:1x1", "torus:1x1", "sphere:1", "disk:1"}) {
    const ModelSurface s = ModelSurface::parse(spec);
    for (double lambda : {1e4, 4e4}) {
      const double ratio = static_cast<double>(eigenvalues(s, lambda).count()) / lambda;
      EXPECT_NEAR(ratio / (s.volume() / (4 * kPi)), 1.0, 0.1) << spec << " " << lambda;
      EXPECT_LE(static_cast<double>(eigenvalues(s, lambda).count()), weyl_count_upper(s, lambda)) << spec;
    }
  }
}

TEST(Eigenvalues, BudgetIsEnforced) {
  EXPECT_THROW(eigenvalues(FlatTorus{1.0, 1.0}, 1e9, 1000), InvalidArgument);
}

TEST(Eigenvalues, SpectralGap) {
  EXPECT_NEAR(spectral_gap(RoundSphere{1.0}).value, 2.0, 1e-14);
  EXPECT_EQ(spectral_gap(RoundSphere{1.0}).multiplicity, 3);
  EXPECT_NEAR(spectral_gap(FlatTorus{1.0, 2.0}).value, kPi * kPi, 1e-12);
  EXPECT_EQ(spectral_gap(FlatTorus{1.0, 2.0}).multiplicity, 2);
}

TEST(HeatTrace, TorusAgainstLatticeSum) {
  double direct = 0.0;
  for (int m = -30; m <= 30; ++m)
    for (int n = -30; n <= 30; ++n) direct += std::exp(-4 * kPi * kPi * (m * m + n * n) * 0.1);
  EXPECT_NEAR(heat_trace(FlatTorus{1.0, 1.0}, 0.1), direct, 1e-13);
  EXPECT_NEAR(direct, 1.0787, 1e-4);
}

TEST(HeatTrace, ClosedSurfacesApproachOne) {
  const HeatTraceEngine torus(FlatTorus{1.0, 1.0});
  const HeatTraceEngine sphere(RoundSphere{1.0});
  for (double t : {1.0, 2.0, 4.0}) {
    EXPECT_NEAR(torus.excess(t) / (4 * std::exp(-4 * kPi * kPi * t)), 1.0, 1e-6);
    EXPECT_NEAR(sphere.excess(t) / (3 * std::exp(-2 * t)), 1.0, 6 * std::exp(-4 * t));
  }
}

TEST(HeatTrace, RectangleIsProductOfIntervals) {
  for (double t : {0.01, 0.1, 1.0}) {
    const double i = heat_trace(IntervalDirichlet{1.0}, t);
    const double r = heat_trace(RectangleDirichlet{1.0, 1.0}, t);
    EXPECT_NEAR(r, i * i, 1e-13 * std::max(1.0, r)) << t;
  }
}

TEST(HeatTrace, PoissonAndEigenSumsAgreeNearCrossover) {
  for (const char* spec : {"interval:1", "rect:1x2", "torus:1x1", "torus:1x2"}) {
    const ModelSurface s = ModelSurface::parse(spec);
    for (double t = 0.02; t <= 0.2; t *= 1.25) {
      const double p = heat_trace_poisson(s, t), e = heat_trace_eigen_sum(s, t);
      EXPECT_NEAR(p, e, 1e-12 * std::max(1.0, e)) << spec << " t=" << t;
    }
  }
}

TEST(HeatTrace, StrictlyDecreasing) {
  for (const auto& spec : all_surfaces()) {
    const ModelSurface s = ModelSurface::parse(spec);
    const double floor = HeatTraceEngine::default_t_min(s);
    const HeatTraceEngine engine(s, floor > 0.0 ? std::min(floor, 1e-3) : 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
      const double t = 1e-3 * std::pow(10.0, 3.0 * i / 49.0);
      const double v = engine.trace(t);
      EXPECT_LT(v, prev) << spec << " t=" << t;
      prev = v;
    }
  }
}

TEST(ShortTime, TorusPredictionIsExactAreaTerm) {
  const ModelSurface s = FlatTorus{2.0, 3.0};
  for (double t : {0.01, 0.1, 1.0}) EXPECT_DOUBLE_EQ(short_time_prediction(s, t), 6.0 / (4 * kPi * t));
}

TEST(ShortTime, RectangleResidualIsExponentiallySmall) {
  const ModelSurface s = RectangleDirichlet{1.0, 1.0};
  EXPECT_LT(std::abs(heat_trace(s, 1e-3) - short_time_prediction(s, 1e-3)), 1e-6);
}

TEST(ShortTime, SphereRemainderIsOrderT) {
  const HeatTraceEngine engine(RoundSphere{1.0}, 1e-4);
  std::vector<double> x, y;
  for (int i = 0; i <= 8; ++i) {
    const double t = 1e-4 * std::pow(100.0, i / 8.0);
    const double r = engine.trace(t) - short_time_prediction(RoundSphere{1.0}, t);
    EXPECT_LT(std::abs(r) / t, 1.0) << t;
    x.push_back(std::log(t));
    y.push_back(std::log(std::abs(r)));
  }
  EXPECT_NEAR(fit_line(x, y).slope, 1.0, 0.05);
}

TEST(HeatTrace, TailBoundCertifiesCutoff) {
  for (const auto& spec : all_surfaces()) {
    const ModelSurface s = ModelSurface::parse(spec);
    for (double t : {0.01, 0.1}) {
      const double cutoff = heat_trace_cutoff(s, t);
      EXPECT_LE(heat_trace_tail_bound(s, cutoff, t), kTraceTailTolerance * 1.0001) << spec;
    }
  }
}
