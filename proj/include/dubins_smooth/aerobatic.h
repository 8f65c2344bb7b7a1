#ifndef DUBINS_SMOOTH_AEROBATIC_H_
#define DUBINS_SMOOTH_AEROBATIC_H_

#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"
#include "dubins_smooth/pipeline.h"

namespace dubins_smooth {

// Bounds in the frame rotated about the x-axis. The flight-path angle in
// that frame has no magnitude limit.
struct RotatedFrameBounds {
  double phi_r_min = 0.0;
  double phi_r_max = 0.0;
  double dphi_r_min = 0.0;
  double dphi_r_max = 0.0;
  double dgamma_r_min = 0.0;
  double dgamma_r_max = 0.0;
};

// (x, y, z) -> (x, z, -y).
Waypoint RotateToVertical(const Waypoint& p);

// Inverse of RotateToVertical.
Waypoint RotateFromVertical(const Waypoint& p);

RotatedFrameBounds MimicBounds(const VehicleLimits& limits);

// Limits to plan with in the rotated frame.
VehicleLimits RotatedLimits(const VehicleLimits& limits);

// XZ when the vertical extent exceeds threshold times the planar bounding
// box diagonal.
Plane DominatingPlane(const std::vector<Waypoint>& waypoints,
                      double threshold = 1.0);

// Maps a sample planned in the rotated frame back to the original frame.
TrajectorySample RotateSampleBack(const TrajectorySample& r);

// Inverse of RotateSampleBack.
TrajectorySample RotateSampleToVertical(const TrajectorySample& s);

// Plans in the rotated frame and rotates the trajectory back.
SmoothingResult PlanAerobatic(const std::vector<Waypoint>& waypoints,
                              const PipelineConfig& cfg);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_AEROBATIC_H_
