#include "dubins_smooth/roll_lp.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dubins_smooth/error.h"
#include "scenarios.h"

namespace dubins_smooth {
namespace {

constexpr double kSpeed = 20.0;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SmoothingError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a SmoothingError";
  return ErrorCode::kConfig;
}

RollSolution Solve(const ReferencePath& path, const RollLpConfig& cfg) {
  const int n = path.steps();
  return SolveRoll(path, std::vector<double>(n + 1, kSpeed),
                   std::vector<double>(n, 0.0), VehicleLimits{}, cfg);
}

TEST(LinearizeTest, StraightReferenceInputGain) {
  const SpatialLinearModel m = LinearizeSpatial(0.0, 20.0, 20.0, 9.81);
  EXPECT_NEAR(m.b[0], 0.024525, 1e-15);
  EXPECT_DOUBLE_EQ(m.b[1], 0.0);
  EXPECT_DOUBLE_EQ(m.w[0], 0.0);
  EXPECT_DOUBLE_EQ(m.w[1], 0.0);
}

TEST(LinearizeTest, StateMatrixIsNilpotent) {
  for (double kappa : {-0.03, 0.0, 0.02}) {
    const SpatialLinearModel m = LinearizeSpatial(kappa, 25.0, 24.0, 9.81);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sq = 0.0;
        for (int l = 0; l < 2; ++l) sq += m.a[i][l] * m.a[l][j];
        EXPECT_NEAR(sq, 0.0, 1e-15);
      }
    }
  }
}

TEST(LinearizeTest, DriftEqualsNegativeCurvature) {
  const SpatialLinearModel m = LinearizeSpatial(0.02, 20.0, 20.0, 9.81);
  EXPECT_NEAR(m.w[0], -0.02, 1e-15);
}

TEST(LinearizeTest, AboutNonzeroRollUsesSecantSquared) {
  const double phi = 0.3;
  const SpatialLinearModel m =
      LinearizeSpatialAbout(0.0, 9.81 / 20.0, 20.0, phi);
  const double sec = 1.0 / std::cos(phi);
  EXPECT_NEAR(m.b[0], 9.81 / 400.0 * sec * sec, 1e-15);
}

TEST(DiscretizeTest, ClosedFormInputColumn) {
  const SpatialLinearModel d =
      Discretize(LinearizeSpatial(0.0, 20.0, 20.0, 9.81), 1.0);
  EXPECT_NEAR(d.b[0], 0.024525, 1e-15);
  EXPECT_NEAR(d.b[1], 0.0122625, 1e-15);
  EXPECT_DOUBLE_EQ(d.a[0][0], 1.0);
  EXPECT_DOUBLE_EQ(d.a[1][1], 1.0);
}

TEST(DiscretizeTest, VanishingStep) {
  const SpatialLinearModel d =
      Discretize(LinearizeSpatial(0.01, 20.0, 20.0, 9.81), 1e-9);
  EXPECT_NEAR(d.a[0][0], 1.0, 1e-12);
  EXPECT_NEAR(d.a[1][0], 0.0, 1e-8);
  EXPECT_NEAR(d.b[0], 0.0, 1e-9);
  EXPECT_NEAR(d.w[0], 0.0, 1e-9);
}

TEST(DiscretizeTest, ZeroStateMatrixIsEuler) {
  SpatialLinearModel m;
  m.b = {0.3, -0.2};
  m.w = {0.1, 0.05};
  const SpatialLinearModel d = Discretize(m, 2.5);
  EXPECT_DOUBLE_EQ(d.b[0], 0.75);
  EXPECT_DOUBLE_EQ(d.b[1], -0.5);
  EXPECT_DOUBLE_EQ(d.w[0], 0.25);
  EXPECT_DOUBLE_EQ(d.a[0][1], 0.0);
}

TEST(BuildLpTest, DecisionCounts) {
  const ReferencePath path = ResampleArclength(testing::StraightLine(3.0), 1.0);
  ASSERT_EQ(path.steps(), 3);
  RollLpConfig cfg;
  const std::vector<double> v(4, kSpeed);
  const std::vector<double> gamma(3, 0.0);
  EXPECT_EQ(BuildLp(path, v, gamma, VehicleLimits{}, cfg).n, 6);
  cfg.variant = RollVariant::kLp2;
  EXPECT_EQ(BuildLp(path, v, gamma, VehicleLimits{}, cfg).n, 7);
}

TEST(BuildLpTest, ValidityRowsAreAppended) {
  const ReferencePath path = ResampleArclength(testing::EdgyCorner(50.0), 2.0);
  const int n = path.steps();
  const std::vector<double> v(n + 1, kSpeed);
  const std::vector<double> gamma(n, 0.0);
  int curved = 0;
  for (int k = 1; k <= n; ++k) {
    if (std::fabs(path.stations[k].kappa) > 1e-9) ++curved;
  }
  ASSERT_GT(curved, 0);
  std::set<int> all;
  for (int k = 1; k <= n; ++k) all.insert(k);
  const RollLpConfig cfg;
  const int base =
      AssembleRollLp(path, v, gamma, VehicleLimits{}, cfg).lp.m;
  const int with =
      AssembleRollLp(path, v, gamma, VehicleLimits{}, cfg, {}, all)
          .lp.m;
  EXPECT_EQ(with - base, curved);
}

TEST(BuildLpTest, MismatchedInputs) {
  const ReferencePath path = ResampleArclength(testing::StraightLine(10.0), 1.0);
  EXPECT_EQ(CodeOf([&] {
              BuildLp(path, std::vector<double>(3, kSpeed),
                      std::vector<double>(10, 0.0), VehicleLimits{},
                      RollLpConfig{});
            }),
            ErrorCode::kDimensionMismatch);
}

TEST(SolveRollTest, StraightReferenceIsEquilibrium) {
  const ReferencePath path =
      ResampleArclength(testing::StraightLine(200.0), 2.0);
  const RollSolution s = Solve(path, RollLpConfig{});
  EXPECT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0.0, 1e-9);
  for (double phi : s.phi) EXPECT_NEAR(phi, 0.0, 1e-7);
  for (double e : s.e_y) EXPECT_NEAR(e, 0.0, 1e-7);
}

TEST(SolveRollTest, CornerDrivesRollAndRateBounds) {
  const ReferencePath path = ResampleArclength(testing::EdgyCorner(200.0), 2.0);
  const RollSolution s = Solve(path, RollLpConfig{});
  const VehicleLimits limits;
  ASSERT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_GT(s.objective, 0.0);
  ASSERT_EQ(s.phi.size(), static_cast<size_t>(path.steps()));
  double top = 0.0;
  int rate_active = 0;
  for (size_t k = 0; k < s.phi.size(); ++k) {
    EXPECT_LE(s.phi[k], limits.phi_max + 1e-9);
    EXPECT_GE(s.phi[k], limits.phi_min - 1e-9);
    top = std::max(top, std::fabs(s.phi[k]));
    if (k == 0) continue;
    const double bound = path.h / kSpeed * limits.dphi_max;
    const double step = std::fabs(s.phi[k] - s.phi[k - 1]);
    EXPECT_LE(step, bound + 1e-9);
    if (std::fabs(step - bound) < 1e-7) ++rate_active;
  }
  EXPECT_NEAR(top, limits.phi_max, 1e-7);
  EXPECT_GT(rate_active, 0);
}

TEST(SolveRollTest, Lp2KeepsCornerOnOneSide) {
  const ReferencePath path = ResampleArclength(testing::EdgyCorner(200.0), 2.0);
  RollLpConfig cfg;
  cfg.variant = RollVariant::kLp2;
  const RollSolution s = Solve(path, cfg);
  ASSERT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_NEAR(s.slack, 0.0, 1e-9);
  for (double e : s.e_y) EXPECT_LE(e, 1e-6);
}

TEST(SolveRollTest, Lp2ObjectiveDominatesLp1) {
  const ReferencePath path = ResampleArclength(testing::Course3d(), 5.0);
  RollLpConfig cfg;
  const RollSolution lp1 = Solve(path, cfg);
  cfg.variant = RollVariant::kLp2;
  const RollSolution lp2 = Solve(path, cfg);
  EXPECT_GE(lp2.objective, lp1.objective - 1e-6);
}

TEST(SolveRollTest, Lp2SlackAbsorbsInitialOffset) {
  const ReferencePath path =
      ResampleArclength(testing::StraightLine(200.0), 2.0);
  RollLpConfig cfg;
  cfg.variant = RollVariant::kLp2;
  cfg.initial_e_y = 5.0;
  const RollSolution s = Solve(path, cfg);
  ASSERT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_GT(s.slack, 0.0);
  // The initial offset is given; the bound applies from the first step on.
  for (size_t k = 1; k < s.e_y.size(); ++k) {
    EXPECT_LE(s.e_y[k], s.slack + 1e-6);
  }
}

TEST(SolveRollTest, TightArcLp2StaysConsistent) {
  const ReferencePath path =
      ResampleArclength(testing::ArcPath(100.0, 100.0, 1.5, 100.0), 5.0);
  RollLpConfig cfg;
  cfg.variant = RollVariant::kLp2;
  cfg.lp_iterations = 3;
  const RollSolution s = Solve(path, cfg);
  ASSERT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_EQ(s.lp_iterations, 3);
  for (double e : s.e_y) EXPECT_LE(e, s.slack + 1e-6);
  const VehicleLimits limits;
  for (double phi : s.phi) {
    EXPECT_LE(phi, limits.phi_max + 1e-9);
    EXPECT_GE(phi, limits.phi_min - 1e-9);
  }
}

TEST(SolveRollTest, RefinedSolutionTracksInClosedLoop) {
  const ReferencePath path =
      ResampleArclength(testing::ArcPath(100.0, 150.0, 1.0, 100.0), 5.0);
  RollLpConfig cfg;
  cfg.lp_iterations = 3;
  const RollSolution s = Solve(path, cfg);
  ASSERT_EQ(s.lp_status, LpStatus::kOptimal);
  EXPECT_LE(ClosedLoopLateralError(s, VehicleLimits{}, VehicleModel::kAirplane,
                                   0.002),
            0.25);
}

TEST(SolveRollTest, SmoothedPathHasOnePointPerStation) {
  const ReferencePath path = ResampleArclength(testing::EdgyCorner(120.0), 4.0);
  const RollSolution s = Solve(path, RollLpConfig{});
  EXPECT_EQ(s.smoothed_path.size(), s.reference.stations.size());
  EXPECT_EQ(s.e_y.size(), s.reference.stations.size());
}

TEST(SolveRollTest, FixedInitialRollIsHonoured) {
  const ReferencePath path = ResampleArclength(testing::EdgyCorner(120.0), 2.0);
  RollLpConfig cfg;
  cfg.initial_phi = 0.1;
  const RollSolution s = Solve(path, cfg);
  EXPECT_NEAR(s.phi.front(), 0.1, 1e-12);
}

}  // namespace
}  // namespace dubins_smooth
