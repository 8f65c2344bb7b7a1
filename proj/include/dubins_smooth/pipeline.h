#ifndef DUBINS_SMOOTH_PIPELINE_H_
#define DUBINS_SMOOTH_PIPELINE_H_

#include <string>
#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"
#include "dubins_smooth/roll_lp.h"

namespace dubins_smooth {

enum class AerobaticMode {
  kAuto,
  kForceXy,
  kForceXz,
};

enum class Plane {
  kXy,
  kXz,
};

const char* PlaneName(Plane plane);

inline RollLpConfig RefinedRollConfig() {
  RollLpConfig roll;
  roll.lp_iterations = 3;
  return roll;
}

struct PipelineConfig {
  VehicleModel model = VehicleModel::kAirplane;
  // Upper bound on the integration step of the validation simulation.
  double t_s = 0.1;
  // Planar station spacing.
  double h = 5.0;
  VehicleLimits limits;
  double v_ref = 20.0;
  // Optional speed per waypoint; overrides v_ref when not empty.
  std::vector<double> v_ref_profile;
  // Optional terrain slope per waypoint for the tractor model.
  std::vector<double> terrain_gamma;
  // Two refinement passes about the previous solution by default.
  RollLpConfig roll = RefinedRollConfig();
  AerobaticMode aerobatic = AerobaticMode::kAuto;
  double plane_threshold = 1.0;
  // Rotated-frame flight-path angle beyond which the frame mapping is
  // flagged as approximate.
  double approximation_threshold = 0.3;
  bool speed_limiting = true;
};

struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  double v = 0.0;
};

struct PipelineMetrics {
  // Largest lateral offset predicted by the roll LP.
  double max_abs_e_y = 0.0;
  // Largest planar distance between the simulated path and the reference.
  double max_tracking_error = 0.0;
  // Largest planar distance between the simulated and the LP path.
  double max_prediction_gap = 0.0;
  double max_abs_phi = 0.0;
  double max_abs_gamma = 0.0;
  double min_v_margin = 0.0;
  double slack = 0.0;
  double lp_objective = 0.0;
  int gamma_clamp_count = 0;
  int speed_limited_count = 0;
  int rate_clamp_count = 0;
  int lp_iterations = 0;
  int simplex_iterations = 0;
  int validity_rows = 0;
  int stations = 0;
  bool approximation_warning = false;
  double max_abs_gamma_r = 0.0;
  // Wall-clock time; not part of any exported file.
  double solve_seconds = 0.0;
};

struct SmoothingResult {
  std::vector<TrajectorySample> trajectory;
  PipelineMetrics metrics;
  Plane frame = Plane::kXy;
  VehicleModel model = VehicleModel::kAirplane;
  // Limits the trajectory was planned for, in its own frame.
  VehicleLimits limits;
  // Trajectory and limits of the frame the plan was computed in; equal to
  // the outputs above for planar plans.
  std::vector<TrajectorySample> planning_trajectory;
  VehicleLimits planning_limits;
};

void ValidateConfig(const PipelineConfig& cfg);

// Runs resampling, flight-path angle control, the roll LP, the speed law and
// the validation simulation in the frame of the given waypoints. Errors
// carry the failing stage.
SmoothingResult RunPlanarPipeline(const std::vector<Waypoint>& waypoints,
                                  const PipelineConfig& cfg);

// Selects the planning frame and runs the pipeline in it.
SmoothingResult RunPipeline(const std::vector<Waypoint>& waypoints,
                            const PipelineConfig& cfg);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
};

struct CheckTolerances {
  double limit = 1e-9;
  double rate = 1e-6;
};

// Checks magnitudes per sample and rates between consecutive samples, with
// the rate over a step taken as the control change divided by the elapsed
// time. Also requires t and s to be nondecreasing.
FeasibilityReport CheckTrajectory(const std::vector<TrajectorySample>& traj,
                                  const VehicleLimits& limits,
                                  VehicleModel model = VehicleModel::kAirplane,
                                  const CheckTolerances& tol = {});

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_PIPELINE_H_
