#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "loopzeta/constants.hpp"
#include "loopzeta/error.hpp"
#include "loopzeta/loop_mass.hpp"
#include "loopzeta/stats.hpp"

using namespace loopzeta;

namespace {

const HeatTraceEngine& engine_for(const std::string& spec, double t_min = 0.0) {
  static std::map<std::pair<std::string, double>, std::unique_ptr<HeatTraceEngine>> cache;
  auto& slot = cache[{spec, t_min}];
  if (!slot) slot = std::make_unique<HeatTraceEngine>(ModelSurface::parse(spec), t_min);
  return *slot;
}

double log_det(const std::string& spec) { return log_det_zeta(engine_for(spec), 0.1).log_det; }

std::vector<double> deltas() {
  std::vector<double> d;
  for (int i = 0; i < 7; ++i) d.push_back(1e-4 * std::pow(100.0, i / 6.0));
  return d;
}

}  // namespace

TEST(LoopMassWindow, EmptyWindowOnBoundarySurface) {
  EXPECT_LT(loop_mass(engine_for("disk:1"), 400.0, kInfinity).value, 1e-40);
  EXPECT_EQ(loop_mass(engine_for("rect:1x2"), 1.0, 1.0).value, 0.0);
}

TEST(LoopMassWindow, SecondQuadratureAgrees) {
  const Integral a = loop_mass(engine_for("disk:1"), 0.04, kInfinity, 0.0, 2.0);
  const Integral b = loop_mass(engine_for("disk:1"), 0.04, kInfinity, 0.0, std::sqrt(2.0));
  EXPECT_NEAR(a.value, b.value, 1e-9);
}

TEST(LoopMassWindow, Additivity) {
  const auto& e = engine_for("torus:1x1");
  const double whole = loop_mass(e, 0.04, 40.0).value;
  EXPECT_NEAR(whole, loop_mass(e, 0.04, 1.0).value + loop_mass(e, 1.0, 40.0).value, 1e-10);
  const auto& d = engine_for("disk:1");
  EXPECT_NEAR(loop_mass(d, 0.04, kInfinity).value, loop_mass(d, 0.04, 0.5).value + loop_mass(d, 0.5, kInfinity).value,
              1e-10);
}

TEST(LoopMassWindow, Monotonicity) {
  const auto& e = engine_for("sphere:1");
  double prev = loop_mass(e, 0.01, 10.0).value;
  for (double low : {0.02, 0.05, 0.1, 1.0}) {
    const double m = loop_mass(e, low, 10.0).value;
    EXPECT_LT(m, prev);
    prev = m;
  }
  prev = 0.0;
  for (double high : {0.1, 1.0, 10.0, 100.0}) {
    const double m = loop_mass(e, 0.01, high).value;
    EXPECT_GT(m, prev);
    prev = m;
  }
  prev = loop_mass(e, 0.01, kInfinity, 1e-3).value;
  for (double kappa : {1e-2, 1e-1, 1.0}) {
    const double m = loop_mass(e, 0.01, kInfinity, kappa).value;
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(LoopMassWindow, BothSubstitutionFormsAgree) {
  for (const char* spec : {"disk:1", "rect:1x2", "interval:1"}) {
    for (double delta : {1e-3, 1e-2, 0.1}) {
      const double u_form = loop_mass(engine_for(spec), 4 * delta, kInfinity).value;
      const double t_form = loop_mass_t_form(engine_for(spec), 4 * delta, kInfinity).value;
      EXPECT_NEAR(u_form, t_form, 1e-10 * std::max(1.0, std::abs(u_form))) << spec << " delta=" << delta;
    }
  }
}

TEST(LoopMassWindow, DivergentQueryIsRejected) {
  EXPECT_THROW(loop_mass(engine_for("torus:1x1"), 0.04, kInfinity), InvalidArgument);
  EXPECT_THROW(loop_mass(LoopMassQuery{RoundSphere{1.0}, 0.04, kInfinity, 0.0}), InvalidArgument);
  EXPECT_THROW(loop_mass(engine_for("disk:1"), 0.5, 0.1), InvalidArgument);
}

TEST(BoundaryExpansion, DiskResidualScalesLikeRootDelta) {
  const auto& e = engine_for("disk:1", 1e-4);
  const double ld = log_det_zeta(e, 0.1).log_det;
  std::vector<double> x, y;
  for (double d : deltas()) {
    x.push_back(std::log(d));
    y.push_back(std::log(std::abs(theorem_residual_boundary(e, d, ld))));
  }
  EXPECT_NEAR(fit_line(x, y).slope, 0.5, 0.1);
  const double ratio = theorem_residual_boundary(e, 2.5e-4, ld) / theorem_residual_boundary(e, 1e-3, ld);
  EXPECT_NEAR(ratio, 0.5, 0.15);
}

TEST(BoundaryExpansion, RectangleCornerConstantLeavesOnlyRounding) {
  // The rectangle trace equals a/t + b/sqrt(t) + 1/4 up to e^{-a^2/t}-sized
  // terms, so the residual is at the level of rounding for every delta here.
  const auto& e = engine_for("rect:1x2");
  const double ld = log_det("rect:1x2");
  for (double d : deltas()) EXPECT_LT(std::abs(theorem_residual_boundary(e, d, ld)), 1e-10) << d;
}

TEST(ClosedExpansion, TorusResidualIsBelowOrderDelta) {
  const auto& e = engine_for("torus:1x1");
  const double ld = log_det("torus:1x1");
  for (double d : deltas()) EXPECT_LT(std::abs(theorem_residual_closed(e, d, 50.0, ld)), 1e-10 + d * 1e-6) << d;
}

TEST(ClosedExpansion, SphereResidualIsOrderDelta) {
  const auto& e = engine_for("sphere:1", 1e-4);
  const double ld = log_det_zeta(e, 0.1).log_det;
  std::vector<double> x, y;
  for (double d : deltas()) {
    x.push_back(std::log(d));
    y.push_back(std::log(std::abs(theorem_residual_closed(e, d, 50.0, ld))));
  }
  EXPECT_NEAR(fit_line(x, y).slope, 1.0, 0.15);
}

TEST(ClosedExpansion, SphereCapDecaysAtLeastLikeHalfTheGap) {
  const auto& e = engine_for("sphere:1", 1e-4);
  const double ld = log_det_zeta(e, 0.1).log_det;
  const double limit = theorem_residual_closed(e, 1e-3, 200.0, ld);
  const double base = std::abs(theorem_residual_closed(e, 1e-3, 5.0, ld) - limit);
  for (double c : {10.0, 20.0, 40.0}) {
    const double gap = std::abs(theorem_residual_closed(e, 1e-3, c, ld) - limit);
    EXPECT_LE(gap, base * std::exp(-(c - 5.0)) + 1e-12) << c;
  }
}

TEST(ClosedExpansion, BothLimitsPushed) {
  for (const char* spec : {"torus:1x1", "sphere:1"}) {
    const auto& e = engine_for(spec, 1e-4);
    EXPECT_LT(std::abs(theorem_residual_closed(e, 1e-4, 100.0, log_det_zeta(e, 0.1).log_det)), 1e-3) << spec;
  }
}

TEST(DecayExpansion, TorusResidualVanishesWithKappa) {
  const auto& e = engine_for("torus:1x1");
  const double ld = log_det("torus:1x1");
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double r = std::abs(decay_residual(e, 1e-2, k, ld));
    EXPECT_LT(r, prev) << k;
    prev = r;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(DecayExpansion, SphereSmallAtSmallKappa) {
  const auto& e = engine_for("sphere:1");
  EXPECT_LT(std::abs(decay_residual(e, 1e-2, 1e-5, log_det("sphere:1"))), 1e-3);
}

TEST(DecayExpansion, HalvingDeltaKeepsResidualBounded) {
  const auto& e = engine_for("sphere:1", 1e-4);
  const double ld = log_det_zeta(e, 0.1).log_det;
  for (double d = 1e-2; d > 1e-4; d /= 2) EXPECT_LT(std::abs(decay_residual(e, d, 1e-3, ld)), 1e-2) << d;
}

TEST(WeightedLoops, RecoverZeta) {
  for (double s : {1.5, 2.0, 3.0}) {
    const auto& e = engine_for("rect:1x1");
    EXPECT_NEAR(zeta_from_weighted_loops(e, s).value, zeta_eigen_sum(e, s).value, 1e-7) << s;
  }
  const auto& d = engine_for("disk:1");
  EXPECT_NEAR(zeta_from_weighted_loops(d, 2.0).value, zeta_eigen_sum(d, 2.0).value, 1e-7);
}

TEST(WeightedLoops, Homogeneity) {
  const double one = zeta_from_weighted_loops(RectangleDirichlet{1.0, 1.0}, 2.0);
  const double two = zeta_from_weighted_loops(RectangleDirichlet{2.0, 2.0}, 2.0);
  EXPECT_NEAR(two / one, 16.0, 1e-9);
}
