#include "dubins_smooth/aerobatic.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dubins_smooth/error.h"

namespace dubins_smooth {
namespace {

constexpr double kHalfPi = 1.57079632679489661923;

}  // namespace

Waypoint RotateToVertical(const Waypoint& p) { return {p.x, p.z, -p.y}; }

Waypoint RotateFromVertical(const Waypoint& p) { return {p.x, -p.z, p.y}; }

RotatedFrameBounds MimicBounds(const VehicleLimits& limits) {
  RotatedFrameBounds b;
  b.phi_r_min =
      std::atan(-std::fabs(limits.dgamma_min) * limits.v_min / limits.g);
  b.phi_r_max = std::atan(limits.dgamma_max * limits.v_max / limits.g);
  b.dphi_r_min = limits.dphi_min;
  b.dphi_r_max = limits.dphi_max;
  b.dgamma_r_min = limits.g * std::tan(limits.phi_min) / limits.v_max;
  b.dgamma_r_max = limits.g * std::tan(limits.phi_max) / limits.v_min;
  return b;
}

VehicleLimits RotatedLimits(const VehicleLimits& limits) {
  const RotatedFrameBounds b = MimicBounds(limits);
  VehicleLimits r = limits;
  r.phi_min = b.phi_r_min;
  r.phi_max = b.phi_r_max;
  r.dphi_min = b.dphi_r_min;
  r.dphi_max = b.dphi_r_max;
  r.gamma_min = -std::numeric_limits<double>::infinity();
  r.gamma_max = std::numeric_limits<double>::infinity();
  r.dgamma_min = b.dgamma_r_min;
  r.dgamma_max = b.dgamma_r_max;
  return r;
}

Plane DominatingPlane(const std::vector<Waypoint>& waypoints,
                      double threshold) {
  if (waypoints.size() < 2) {
    throw SmoothingError(ErrorCode::kTooShort,
                         "plane selection needs two waypoints");
  }
  double x0 = waypoints[0].x, x1 = x0;
  double y0 = waypoints[0].y, y1 = y0;
  double z0 = waypoints[0].z, z1 = z0;
  for (const Waypoint& p : waypoints) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  const double planar = std::hypot(x1 - x0, y1 - y0);
  const double vertical = z1 - z0;
  if (planar == 0.0 && vertical == 0.0) {
    throw SmoothingError(ErrorCode::kDegeneratePath,
                         "waypoints have no extent");
  }
  if (planar == 0.0) return std::isinf(threshold) ? Plane::kXy : Plane::kXz;
  return vertical / planar > threshold ? Plane::kXz : Plane::kXy;
}

TrajectorySample RotateSampleBack(const TrajectorySample& r) {
  TrajectorySample out = r;
  const Waypoint p = RotateFromVertical({r.x, r.y, r.z});
  out.x = p.x;
  out.y = p.y;
  out.z = p.z;
  out.psi = WrapAngle(-r.gamma);
  out.gamma = r.psi;
  out.phi = r.phi + kHalfPi;
  return out;
}

TrajectorySample RotateSampleToVertical(const TrajectorySample& s) {
  TrajectorySample out = s;
  const Waypoint p = RotateToVertical({s.x, s.y, s.z});
  out.x = p.x;
  out.y = p.y;
  out.z = p.z;
  out.psi = s.gamma;
  out.gamma = -s.psi;
  out.phi = s.phi - kHalfPi;
  return out;
}

SmoothingResult PlanAerobatic(const std::vector<Waypoint>& waypoints,
                              const PipelineConfig& cfg) {
  std::vector<Waypoint> rotated;
  rotated.reserve(waypoints.size());
  for (const Waypoint& p : waypoints) rotated.push_back(RotateToVertical(p));
  PipelineConfig rcfg = cfg;
  rcfg.limits = RotatedLimits(cfg.limits);
  SmoothingResult result = RunPlanarPipeline(rotated, rcfg);
  result.frame = Plane::kXz;
  result.planning_trajectory = result.trajectory;
  result.planning_limits = rcfg.limits;
  result.limits = cfg.limits;
  double max_gamma_r = 0.0;
  for (TrajectorySample& s : result.trajectory) {
    max_gamma_r = std::max(max_gamma_r, std::fabs(s.gamma));
    s = RotateSampleBack(s);
  }
  result.metrics.max_abs_gamma_r = max_gamma_r;
  result.metrics.approximation_warning =
      max_gamma_r > cfg.approximation_threshold;
  return result;
}

}  // namespace dubins_smooth
