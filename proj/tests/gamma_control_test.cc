#include "dubins_smooth/gamma_control.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dubins_smooth/error.h"

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

// Altitudes re-integrated from the commanded step angles; the climb rate is
// constant over each step, so the trapezoidal rule is exact per step.
std::vector<double> Reintegrate(const GammaProfile& profile, double z0) {
  std::vector<double> z{z0};
  for (size_t k = 0; k < profile.gamma_bar.size(); ++k) {
    z.push_back(z.back() +
                profile.stations[k].d_s * std::sin(profile.gamma_bar[k]));
  }
  return z;
}

TEST(SamplingSpaceTest, Product) {
  EXPECT_DOUBLE_EQ(SamplingSpace(0.5, 20.0), 10.0);
  EXPECT_DOUBLE_EQ(SamplingSpace(1.0, 1.0), 1.0);
  EXPECT_NEAR(SamplingSpace(0.1, 15.0), 1.5, 1e-15);
  EXPECT_EQ(CodeOf([] { SamplingSpace(0.0, 1.0); }), ErrorCode::kNonPositive);
}

TEST(GammaRawTest, HandValues) {
  EXPECT_DOUBLE_EQ(GammaRaw(7.0, 7.0, 3.0), 0.0);
  EXPECT_NEAR(GammaRaw(5.0, 0.0, 10.0), 0.523599, 1e-6);
  EXPECT_EQ(CodeOf([] { GammaRaw(11.0, 0.0, 10.0); }),
            ErrorCode::kInfeasibleSlope);
}

TEST(ClampRateLimitTest, InsideBoundsUnchanged) {
  VehicleLimits limits;
  EXPECT_DOUBLE_EQ(ClampRateLimit(0.05, 0.06, 10.0, 20.0, limits), 0.06);
}

TEST(ClampRateLimitTest, RateBoundBinds) {
  VehicleLimits limits;
  limits.dgamma_max = 0.2;
  limits.dgamma_min = -0.2;
  limits.gamma_max = 0.3;
  limits.gamma_min = -0.3;
  EXPECT_NEAR(ClampRateLimit(0.0, 0.25, 10.0, 20.0, limits), 0.1, 1e-15);
  EXPECT_NEAR(ClampRateLimit(0.0, -1.0, 10.0, 20.0, limits), -0.1, 1e-15);
}

TEST(ClampRateLimitTest, LimitBindsBeforeRate) {
  VehicleLimits limits;
  limits.gamma_max = 0.3;
  limits.dgamma_max = 5.0;
  EXPECT_DOUBLE_EQ(ClampRateLimit(0.25, 0.9, 10.0, 20.0, limits), 0.3);
}

TEST(MidpointCompensationTest, Averages) {
  const std::vector<double> one = MidpointCompensation({0.2, 0.4});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 0.3, 1e-15);
  const std::vector<double> flat = MidpointCompensation({0.1, 0.1, 0.1});
  EXPECT_EQ(flat, std::vector<double>({0.1, 0.1}));
  const std::vector<double> mixed = MidpointCompensation({0.0, 0.1, -0.1});
  EXPECT_NEAR(mixed[0], 0.05, 1e-15);
  EXPECT_NEAR(mixed[1], 0.0, 1e-15);
  EXPECT_EQ(CodeOf([] { MidpointCompensation({0.1}); }), ErrorCode::kTooShort);
}

TEST(GammaProfileTest, LevelReference) {
  const GammaProfile p = ComputeGammaProfile(std::vector<double>(6, 100.0),
                                             std::vector<double>(6, 20.0), 0.5,
                                             VehicleLimits{});
  for (double g : p.gamma_bar) EXPECT_DOUBLE_EQ(g, 0.0);
  EXPECT_EQ(p.clamp_count, 0);
}

TEST(GammaProfileTest, FeasibleRampIsConstant) {
  const double t_s = 0.5;
  const double v = 20.0;
  const double slope = 0.1;
  std::vector<double> z;
  for (int k = 0; k < 5; ++k) z.push_back(100.0 + slope * k * t_s * v);
  const GammaProfile p = ComputeGammaProfile(z, std::vector<double>(5, v), t_s,
                                             VehicleLimits{});
  EXPECT_EQ(p.clamp_count, 0);
  for (double g : p.gamma_bar) EXPECT_NEAR(g, std::asin(slope), 1e-12);
  for (const GammaStation& st : p.stations) EXPECT_FALSE(st.clamped);
}

TEST(GammaProfileTest, StepReferenceHoldsBoundsStationWise) {
  VehicleLimits limits;
  const double t_s = 0.1;
  const double v = 20.0;
  std::vector<double> z(60, 100.0);
  for (size_t k = 20; k < z.size(); ++k) z[k] = 101.9;
  const GammaProfile p =
      ComputeGammaProfile(z, std::vector<double>(z.size(), v), t_s, limits);
  EXPECT_GT(p.clamp_count, 0);
  const double d_s = t_s * v;
  for (size_t k = 0; k < p.stations.size(); ++k) {
    const double g = p.stations[k].gamma_clamped;
    EXPECT_LE(g, limits.gamma_max + 1e-12);
    EXPECT_GE(g, limits.gamma_min - 1e-12);
    if (k == 0) continue;
    const double dg = g - p.stations[k - 1].gamma_clamped;
    EXPECT_LE(dg, d_s * limits.dgamma_max / v + 1e-12) << k;
    EXPECT_GE(dg, d_s * limits.dgamma_min / v - 1e-12) << k;
  }
}

TEST(GammaProfileTest, SinusoidIsReproducedWithoutClamps) {
  const double t_s = 0.1;
  const double v = 20.0;
  const double d_s = t_s * v;
  const double amplitude = 20.0;
  const double wavelength = 2000.0;
  std::vector<double> z;
  for (int k = 0; k <= 2000; ++k) {
    z.push_back(100.0 +
                amplitude * std::sin(2.0 * kPi * k * d_s / wavelength));
  }
  const GammaProfile p = ComputeGammaProfile(
      z, std::vector<double>(z.size(), v), t_s, VehicleLimits{});
  EXPECT_EQ(p.clamp_count, 0);
  const std::vector<double> back = Reintegrate(p, z[0]);
  double worst = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    worst = std::max(worst, std::fabs(back[k] - z[k]));
  }
  EXPECT_LE(worst, 0.005 * 2.0 * amplitude);
}

TEST(GammaProfileTest, SinusoidLagShrinksWithSampling) {
  const double amplitude = 20.0;
  const double wavelength = 2000.0;
  double previous = INFINITY;
  for (double d_s : {4.0, 2.0, 1.0}) {
    std::vector<double> z;
    const int n = static_cast<int>(wavelength / d_s);
    for (int k = 0; k <= n; ++k) {
      z.push_back(amplitude * std::sin(2.0 * kPi * k * d_s / wavelength));
    }
    const GammaProfile p = ComputeGammaProfile(
        z, std::vector<double>(z.size(), 10.0 * d_s), 0.1, VehicleLimits{});
    const std::vector<double> back = Reintegrate(p, z[0]);
    double worst = 0.0;
    for (size_t k = 0; k < z.size(); ++k) {
      worst = std::max(worst, std::fabs(back[k] - z[k]));
    }
    EXPECT_LT(worst, previous);
    EXPECT_NEAR(worst, 2.0 * kPi * amplitude * d_s / wavelength,
                0.05 * worst);
    previous = worst;
  }
}

TEST(GammaProfileTest, SteepStepIsInfeasible) {
  EXPECT_EQ(CodeOf([] {
              ComputeGammaProfile({0.0, 11.0}, {10.0, 10.0}, 1.0,
                                  VehicleLimits{});
            }),
            ErrorCode::kInfeasibleSlope);
}

TEST(GammaProfileTest, LengthMismatch) {
  EXPECT_EQ(CodeOf([] {
              ComputeGammaProfile({0.0, 1.0, 2.0}, {10.0, 10.0}, 1.0,
                                  VehicleLimits{});
            }),
            ErrorCode::kDimensionMismatch);
}

TEST(ClampGammaSequenceTest, PerStationLimits) {
  VehicleLimits loose;
  VehicleLimits tight;
  tight.gamma_max = 0.05;
  const GammaProfile p = ClampGammaSequence(
      {0.04, 0.04, 0.04}, {1.0, 1.0, 1.0}, {20.0, 20.0, 20.0},
      {loose, loose, tight, loose});
  EXPECT_DOUBLE_EQ(p.stations[1].gamma_clamped, 0.04);
  EXPECT_EQ(p.gamma_bar.size(), 3u);
  EXPECT_EQ(CodeOf([] {
              ClampGammaSequence({0.0}, {1.0, 1.0}, {20.0}, {VehicleLimits{}});
            }),
            ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace dubins_smooth
