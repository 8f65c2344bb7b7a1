#include "dubins_smooth/aerobatic.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "dubins_smooth/error.h"
#include "dubins_smooth/pipeline.h"
#include "scenarios.h"

namespace dubins_smooth {
namespace {

constexpr double kPi = 3.14159265358979323846;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SmoothingError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a SmoothingError";
  return ErrorCode::kConfig;
}

double Distance(const Waypoint& a, const Waypoint& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

TEST(RotationTest, HandValues) {
  const Waypoint r = RotateToVertical({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(r.x, 1.0);
  EXPECT_DOUBLE_EQ(r.y, 3.0);
  EXPECT_DOUBLE_EQ(r.z, -2.0);
  const Waypoint o = RotateToVertical({0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(o.x, 0.0);
  EXPECT_DOUBLE_EQ(o.y, 0.0);
  EXPECT_DOUBLE_EQ(o.z, 0.0);
}

TEST(RotationTest, RoundTripIsIsometry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  std::vector<Waypoint> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({coord(rng), coord(rng), coord(rng)});
  for (size_t i = 0; i < pts.size(); ++i) {
    const Waypoint back = RotateFromVertical(RotateToVertical(pts[i]));
    EXPECT_NEAR(back.x, pts[i].x, 1e-12);
    EXPECT_NEAR(back.y, pts[i].y, 1e-12);
    EXPECT_NEAR(back.z, pts[i].z, 1e-12);
    if (i == 0) continue;
    EXPECT_NEAR(Distance(RotateToVertical(pts[i]), RotateToVertical(pts[i - 1])),
                Distance(pts[i], pts[i - 1]), 1e-12);
  }
}

TEST(RotationTest, SampleMappingRoundTrips) {
  TrajectorySample s;
  s.x = 3.0;
  s.y = -4.0;
  s.z = 120.0;
  s.psi = 0.7;
  s.gamma = -0.2;
  s.phi = 0.3;
  s.v = 22.0;
  const TrajectorySample back = RotateSampleBack(RotateSampleToVertical(s));
  EXPECT_NEAR(back.x, s.x, 1e-12);
  EXPECT_NEAR(back.y, s.y, 1e-12);
  EXPECT_NEAR(back.z, s.z, 1e-12);
  EXPECT_NEAR(back.psi, s.psi, 1e-12);
  EXPECT_NEAR(back.gamma, s.gamma, 1e-12);
  EXPECT_NEAR(back.phi, s.phi, 1e-12);
  EXPECT_DOUBLE_EQ(back.v, s.v);
}

TEST(RotationTest, AlongTrackMotionIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);
  for (int i = 0; i < 100; ++i) {
    TrajectorySample s;
    s.psi = angle(rng);
    s.gamma = angle(rng);
    s.v = 20.0;
    const TrajectorySample r = RotateSampleToVertical(s);
    const StateDerivative original = AirplaneDerivative(
        {s.x, s.y, s.z, s.psi}, {s.gamma, 0.0, s.v}, 9.81);
    const StateDerivative rotated = AirplaneDerivative(
        {r.x, r.y, r.z, r.psi}, {r.gamma, 0.0, r.v}, 9.81);
    EXPECT_NEAR(original.x, rotated.x, 1e-12);
  }
}

TEST(MimicBoundsTest, HandValues) {
  VehicleLimits limits;
  limits.dgamma_max = 0.2;
  limits.v_max = 30.0;
  limits.phi_max = kPi / 4.0;
  limits.v_min = 10.0;
  const RotatedFrameBounds b = MimicBounds(limits);
  EXPECT_NEAR(b.phi_r_max, std::atan(6.0 / 9.81), 1e-15);
  EXPECT_NEAR(b.phi_r_max, 0.548920, 1e-6);
  EXPECT_NEAR(b.dgamma_r_max, 0.981, 1e-9);
  EXPECT_DOUBLE_EQ(b.dphi_r_max, limits.dphi_max);
  EXPECT_DOUBLE_EQ(b.dphi_r_min, limits.dphi_min);
}

TEST(MimicBoundsTest, SymmetricInputsGiveSymmetricBounds) {
  VehicleLimits limits;
  limits.dgamma_min = -0.25;
  limits.dgamma_max = 0.25;
  limits.v_min = 20.0;
  limits.v_max = 20.0;
  const RotatedFrameBounds b = MimicBounds(limits);
  EXPECT_NEAR(b.phi_r_min, -b.phi_r_max, 1e-15);
  EXPECT_NEAR(b.dgamma_r_min, -b.dgamma_r_max, 1e-15);
}

TEST(MimicBoundsTest, RotatedLimitsLeaveClimbAngleOpen) {
  const VehicleLimits r = RotatedLimits(VehicleLimits{});
  EXPECT_TRUE(std::isinf(r.gamma_max));
  EXPECT_TRUE(std::isinf(r.gamma_min));
  EXPECT_LT(r.gamma_min, 0.0);
  EXPECT_NO_THROW(ValidateLimits(r));
}

TEST(DominatingPlaneTest, Selection) {
  const std::vector<Waypoint> square{
      {0, 0, 50}, {100, 0, 50}, {100, 100, 50}, {0, 100, 50}};
  EXPECT_EQ(DominatingPlane(square), Plane::kXy);
  std::vector<Waypoint> loop;
  for (int i = 0; i <= 16; ++i) {
    const double t = 2.0 * kPi * i / 16;
    loop.push_back({30.0 * std::sin(t), 0.0, 100.0 + 80.0 * (1 - std::cos(t))});
  }
  EXPECT_EQ(DominatingPlane(loop), Plane::kXz);
  EXPECT_EQ(DominatingPlane(loop, std::numeric_limits<double>::infinity()),
            Plane::kXy);
  EXPECT_EQ(CodeOf([] { DominatingPlane({{1, 1, 1}, {1, 1, 1}}); }),
            ErrorCode::kDegeneratePath);
}

TEST(PlanAerobaticTest, HalfLoopPassesTheVertical) {
  PipelineConfig cfg;
  cfg.aerobatic = AerobaticMode::kForceXz;
  const SmoothingResult r = RunPipeline(testing::HalfLoop(80.0), cfg);
  EXPECT_EQ(r.frame, Plane::kXz);
  ASSERT_GT(r.trajectory.size(), 10u);
  double top_gamma = 0.0;
  bool crossed = false;
  for (size_t k = 1; k < r.trajectory.size(); ++k) {
    const TrajectorySample& a = r.trajectory[k - 1];
    const TrajectorySample& b = r.trajectory[k];
    top_gamma = std::max(top_gamma, b.gamma);
    // Climbing while the along-track direction turns from +x to -x.
    if (b.z > a.z && b.x < a.x && k > 1 &&
        a.x > r.trajectory[k - 2].x) {
      crossed = true;
    }
  }
  EXPECT_GT(top_gamma, kPi / 2.0);
  EXPECT_TRUE(crossed);
  EXPECT_TRUE(CheckTrajectory(r.planning_trajectory, r.planning_limits)
                  .feasible);
}

TEST(PlanAerobaticTest, ForcedFrameMatchesPlanarPlanOnLevelLine) {
  PipelineConfig cfg;
  cfg.aerobatic = AerobaticMode::kForceXy;
  const SmoothingResult planar = RunPipeline(testing::StraightLine(300.0), cfg);
  cfg.aerobatic = AerobaticMode::kForceXz;
  const SmoothingResult rotated =
      RunPipeline(testing::StraightLine(300.0), cfg);
  ASSERT_EQ(planar.trajectory.size(), rotated.trajectory.size());
  for (size_t k = 0; k < planar.trajectory.size(); ++k) {
    EXPECT_NEAR(planar.trajectory[k].x, rotated.trajectory[k].x, 1e-9);
    EXPECT_NEAR(planar.trajectory[k].y, rotated.trajectory[k].y, 1e-9);
    EXPECT_NEAR(planar.trajectory[k].z, rotated.trajectory[k].z, 1e-9);
    EXPECT_NEAR(planar.trajectory[k].psi, rotated.trajectory[k].psi, 1e-9);
    EXPECT_NEAR(planar.trajectory[k].gamma, rotated.trajectory[k].gamma, 1e-9);
  }
}

TEST(PlanAerobaticTest, LargeRotatedClimbIsFlagged) {
  PipelineConfig cfg;
  cfg.aerobatic = AerobaticMode::kForceXz;
  // Sideways drift in y is a climb in the rotated frame.
  const std::vector<Waypoint> drift{{0, 0, 100}, {100, 60, 100}, {200, 120, 100}};
  const SmoothingResult r = RunPipeline(drift, cfg);
  EXPECT_GT(r.metrics.max_abs_gamma_r, 0.3);
  EXPECT_TRUE(r.metrics.approximation_warning);
  cfg.approximation_threshold = 1.0;
  EXPECT_FALSE(RunPipeline(drift, cfg).metrics.approximation_warning);
}

}  // namespace
}  // namespace dubins_smooth
