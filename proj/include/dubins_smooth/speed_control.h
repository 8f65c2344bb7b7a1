#ifndef DUBINS_SMOOTH_SPEED_CONTROL_H_
#define DUBINS_SMOOTH_SPEED_CONTROL_H_

#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"

namespace dubins_smooth {

struct SpeedStation {
  double s = 0.0;
  double v_max = 0.0;
  double v = 0.0;
  bool limited = false;
};

// v holds one speed per station after the curvature bound and both rate
// passes; v_step holds the midpoint speed of each of the N steps.
struct SpeedProfile {
  std::vector<SpeedStation> stations;
  std::vector<double> v_step;
  int limited_count = 0;

  std::vector<double> StationSpeeds() const;
};

// Highest speed that keeps a steady turn of curvature kappa within the
// roll limit. Returns v_limit on straight stations.
double CurvatureSpeedBound(double kappa, double phi_max, double g,
                           double v_limit);

std::vector<double> VMaxProfile(const ReferencePath& smoothed_path,
                                double phi_max, double g, double v_limit);

// v_ref and v_max_curv hold one value per station and d_s one step length
// per station (the last entry is used only for the time of the last step).
// A speed change over step k may use d_s[k] * |dv bound| / v_k.
SpeedProfile ApplySpeedLaw(const std::vector<double>& v_ref,
                           const std::vector<double>& v_max_curv,
                           const VehicleLimits& limits,
                           const std::vector<double>& d_s,
                           bool backward_pass = true);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_SPEED_CONTROL_H_
