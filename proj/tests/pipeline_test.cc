#include "dubins_smooth/pipeline.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dubins_smooth/error.h"
#include "dubins_smooth/io.h"
#include "dubins_smooth/time_domain_lp.h"
#include "scenarios.h"

namespace dubins_smooth {
namespace {

namespace fs = std::filesystem;

SmoothingError CaughtError(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SmoothingError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a SmoothingError";
  return SmoothingError(ErrorCode::kConfig, "none");
}

TrajectorySample Sample(double t, double phi, double v) {
  TrajectorySample s;
  s.t = t;
  s.s = t * v;
  s.x = t * v;
  s.z = 100.0;
  s.phi = phi;
  s.v = v;
  return s;
}

TEST(CheckTrajectoryTest, AcceptsSteadyFlight) {
  std::vector<TrajectorySample> traj;
  for (int k = 0; k < 10; ++k) traj.push_back(Sample(0.5 * k, 0.1, 20.0));
  const FeasibilityReport r = CheckTrajectory(traj, VehicleLimits{});
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.violations.empty());
}

TEST(CheckTrajectoryTest, FlagsLimitAndRateViolations) {
  const VehicleLimits limits;
  std::vector<TrajectorySample> traj{Sample(0.0, 0.0, 20.0),
                                     Sample(0.1, 0.2, 20.0)};
  FeasibilityReport r = CheckTrajectory(traj, limits);
  EXPECT_FALSE(r.feasible);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("roll rate"), std::string::npos);

  traj = {Sample(0.0, 0.9, 20.0)};
  EXPECT_FALSE(CheckTrajectory(traj, limits).feasible);

  traj = {Sample(0.0, 0.0, 20.0), Sample(1.0, 0.0, 23.0)};
  r = CheckTrajectory(traj, limits);
  EXPECT_FALSE(r.feasible);
  EXPECT_NE(r.violations[0].find("acceleration"), std::string::npos);

  traj = {Sample(1.0, 0.0, 20.0), Sample(0.5, 0.0, 20.0)};
  EXPECT_FALSE(CheckTrajectory(traj, limits).feasible);
  EXPECT_FALSE(CheckTrajectory({}, limits).feasible);
}

TEST(CheckTrajectoryTest, TractorIgnoresClimbLimits) {
  TrajectorySample s = Sample(0.0, 0.0, 4.0);
  s.gamma = 0.6;
  VehicleLimits limits;
  limits.v_min = 1.0;
  EXPECT_FALSE(CheckTrajectory({s}, limits).feasible);
  EXPECT_TRUE(CheckTrajectory({s}, limits, VehicleModel::kTractor).feasible);
}

TEST(ValidateConfigTest, RejectsNonPositiveSettings) {
  PipelineConfig cfg;
  EXPECT_NO_THROW(ValidateConfig(cfg));
  cfg.h = 0.0;
  EXPECT_EQ(CaughtError([&] { ValidateConfig(cfg); }).code(),
            ErrorCode::kConfig);
  cfg = PipelineConfig{};
  cfg.roll.lp_iterations = 0;
  EXPECT_EQ(CaughtError([&] { ValidateConfig(cfg); }).code(),
            ErrorCode::kConfig);
}

TEST(PipelineTest, StraightLineIsLeftAlone) {
  const PipelineConfig cfg;
  const SmoothingResult r = RunPipeline(testing::StraightLine(400.0), cfg);
  EXPECT_EQ(r.frame, Plane::kXy);
  ASSERT_GT(r.trajectory.size(), 10u);
  for (const TrajectorySample& s : r.trajectory) {
    EXPECT_NEAR(s.y, 0.0, cfg.h);
    EXPECT_NEAR(s.z, testing::kAltitude, cfg.h);
    EXPECT_NEAR(s.phi, 0.0, 1e-6);
    EXPECT_NEAR(s.gamma, 0.0, 1e-12);
    EXPECT_NEAR(s.v, cfg.v_ref, 1e-12);
  }
  EXPECT_NEAR(r.trajectory.back().x, 400.0, cfg.h);
  EXPECT_TRUE(CheckTrajectory(r.trajectory, r.limits).feasible);
}

TEST(PipelineTest, Course3dWithLp2IsFeasible) {
  PipelineConfig cfg;
  cfg.roll.variant = RollVariant::kLp2;
  const SmoothingResult r = RunPipeline(testing::Course3d(), cfg);
  const FeasibilityReport report = CheckTrajectory(r.trajectory, r.limits);
  EXPECT_TRUE(report.feasible)
      << (report.violations.empty() ? "" : report.violations[0]);
  EXPECT_GE(r.metrics.slack, 0.0);
  EXPECT_LE(r.metrics.max_abs_phi, cfg.limits.phi_max + 1e-9);
  EXPECT_EQ(r.metrics.lp_iterations, cfg.roll.lp_iterations);
  EXPECT_EQ(static_cast<size_t>(r.metrics.stations), r.trajectory.size());
}

TEST(PipelineTest, FlownTurnsRespectRollLimitAtFinalSpeed) {
  PipelineConfig cfg;
  cfg.v_ref = 30.0;
  const SmoothingResult r =
      RunPipeline(testing::ArcPath(200.0, 60.0, 1.5, 200.0), cfg);
  const std::vector<TrajectorySample>& traj = r.trajectory;
  for (size_t k = 1; k < traj.size(); ++k) {
    const double dt = traj[k].t - traj[k - 1].t;
    ASSERT_GT(dt, 0.0);
    const double turn_rate = WrapAngle(traj[k].psi - traj[k - 1].psi) / dt;
    const double v = traj[k - 1].v;
    EXPECT_LE(v, cfg.v_ref + 1e-12);
    EXPECT_LE(std::fabs(std::atan(v * turn_rate / cfg.limits.g)),
              cfg.limits.phi_max + 1e-6)
        << k;
  }
  EXPECT_TRUE(CheckTrajectory(traj, r.limits).feasible);
}

TEST(PipelineTest, SpeedStageKeepsGeometry) {
  PipelineConfig cfg;
  const std::vector<Waypoint> route =
      testing::ArcPath(200.0, 400.0, 1.0, 200.0);
  // A fast reference after a slow start forces an acceleration ramp.
  cfg.v_ref_profile.assign(route.size(), 29.0);
  cfg.v_ref_profile[0] = 10.0;
  const SmoothingResult limited = RunPipeline(route, cfg);
  cfg.speed_limiting = false;
  const SmoothingResult free = RunPipeline(route, cfg);
  EXPECT_GT(limited.metrics.speed_limited_count, 0);
  EXPECT_TRUE(CheckTrajectory(limited.trajectory, limited.limits).feasible);
  ASSERT_EQ(limited.trajectory.size(), free.trajectory.size());
  for (size_t k = 0; k < free.trajectory.size(); ++k) {
    EXPECT_NEAR(limited.trajectory[k].x, free.trajectory[k].x, 1e-6) << k;
    EXPECT_NEAR(limited.trajectory[k].y, free.trajectory[k].y, 1e-6) << k;
  }
}

TEST(PipelineTest, TractorFollowsTerrain) {
  PipelineConfig cfg;
  cfg.model = VehicleModel::kTractor;
  cfg.v_ref = 4.0;
  cfg.h = 2.0;
  cfg.limits.v_min = 1.0;
  cfg.limits.v_max = 6.0;
  cfg.limits.dv_min = -0.5;
  cfg.limits.dv_max = 0.5;
  cfg.limits.phi_min = -0.6;
  cfg.limits.phi_max = 0.6;
  cfg.limits.dphi_min = -0.4;
  cfg.limits.dphi_max = 0.4;
  cfg.roll.lp_iterations = 2;
  const std::vector<Waypoint> field{
      {0, 0, 10}, {60, 0, 11}, {60, 12, 11}, {0, 12, 10}};
  cfg.terrain_gamma = {0.0166, 0.0, -0.0166, 0.0};
  const SmoothingResult r = RunPipeline(field, cfg);
  EXPECT_EQ(r.model, VehicleModel::kTractor);
  const FeasibilityReport report =
      CheckTrajectory(r.trajectory, r.limits, VehicleModel::kTractor);
  EXPECT_TRUE(report.feasible)
      << (report.violations.empty() ? "" : report.violations[0]);
}

TEST(PipelineTest, ReversalNeedsTheFallback) {
  const SmoothingError e =
      CaughtError([] { RunPipeline(testing::Reversal(), PipelineConfig{}); });
  EXPECT_EQ(e.code(), ErrorCode::kProjectionSingular);
  EXPECT_FALSE(e.stage().empty());
  const TimeDomainResult td =
      SolveTimeDomain(testing::Reversal(), VehicleLimits{}, TimeDomainConfig{});
  EXPECT_FALSE(td.controls.empty());
}

TEST(PipelineTest, ResultsAreDeterministic) {
  const PipelineConfig cfg;
  const SmoothingResult a = RunPipeline(testing::EdgyCorner(150.0), cfg);
  const SmoothingResult b = RunPipeline(testing::EdgyCorner(150.0), cfg);
  EXPECT_EQ(FormatTrajectoryCsv(a.trajectory), FormatTrajectoryCsv(b.trajectory));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* cli = std::getenv("DUBINS_SMOOTH_CLI");
    const char* scenarios = std::getenv("DUBINS_SMOOTH_SCENARIOS");
    if (cli == nullptr || scenarios == nullptr) {
      GTEST_SKIP() << "CLI location not provided";
    }
    cli_ = cli;
    scenarios_ = scenarios;
    work_ = fs::temp_directory_path() /
            ("dubins_smooth_cli_" +
             std::string(::testing::UnitTest::GetInstance()
                             ->current_test_info()
                             ->name()));
    fs::remove_all(work_);
    fs::create_directories(work_);
  }
  void TearDown() override {
    if (!work_.empty()) fs::remove_all(work_);
  }

  int Run(const std::string& args) {
    const std::string cmd = "\"" + cli_ + "\" " + args + " > \"" +
                            (work_ / "stdout.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string cli_;
  std::string scenarios_;
  fs::path work_;
};

TEST_F(CliTest, SmoothWritesOutputs) {
  const fs::path out = work_ / "straight";
  EXPECT_EQ(Run("smooth --input " + scenarios_ + "/straight.csv --out " +
                out.string() + " --plots"),
            0);
  EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "result.json"));
  EXPECT_TRUE(fs::exists(out / "plots" / "xy.csv"));
  EXPECT_EQ(Run("check --trajectory " + (out / "result.json").string()), 0);
}

TEST_F(CliTest, ReversalExitsWithPathError) {
  const fs::path out = work_ / "reversal";
  EXPECT_EQ(Run("smooth --input " + scenarios_ + "/reversal.csv --out " +
                out.string()),
            2);
  const std::string report = ReadTextFile((out / "error.json").string());
  EXPECT_NE(report.find("ProjectionSingular"), std::string::npos);
  EXPECT_EQ(Run("fallback --input " + scenarios_ + "/reversal.csv --out " +
                (work_ / "fallback").string()),
            0);
}

TEST_F(CliTest, MissingInputIsAnIoError) {
  EXPECT_EQ(Run("smooth --input " + (work_ / "absent.csv").string() +
                " --out " + (work_ / "x").string()),
            3);
  EXPECT_EQ(Run("smooth --bogus"), 3);
}

}  // namespace
}  // namespace dubins_smooth
