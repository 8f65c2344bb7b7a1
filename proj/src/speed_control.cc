#include "dubins_smooth/speed_control.h"

#include <algorithm>
#include <cmath>

#include "dubins_smooth/error.h"

namespace dubins_smooth {

std::vector<double> SpeedProfile::StationSpeeds() const {
  std::vector<double> out(stations.size());
  for (size_t k = 0; k < stations.size(); ++k) out[k] = stations[k].v;
  return out;
}

double CurvatureSpeedBound(double kappa, double phi_max, double g,
                           double v_limit) {
  if (!(phi_max > 0.0) || !(phi_max < 1.5707963267948966)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "roll limit must lie strictly between 0 and pi/2");
  }
  const double abs_kappa = std::fabs(kappa);
  if (abs_kappa == 0.0) return v_limit;
  return std::min(v_limit, std::sqrt(g * std::tan(phi_max) / abs_kappa));
}

std::vector<double> VMaxProfile(const ReferencePath& smoothed_path,
                                double phi_max, double g, double v_limit) {
  std::vector<double> out;
  out.reserve(smoothed_path.stations.size());
  for (const Station& st : smoothed_path.stations) {
    out.push_back(CurvatureSpeedBound(st.kappa, phi_max, g, v_limit));
  }
  return out;
}

SpeedProfile ApplySpeedLaw(const std::vector<double>& v_ref,
                           const std::vector<double>& v_max_curv,
                           const VehicleLimits& limits,
                           const std::vector<double>& d_s,
                           bool backward_pass) {
  const size_t count = v_ref.size();
  if (count < 2 || v_max_curv.size() != count || d_s.size() != count) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "speed law inputs have inconsistent lengths");
  }
  for (size_t k = 0; k < count; ++k) {
    if (!(d_s[k] > 0.0)) {
      throw SmoothingError(ErrorCode::kNonPositive,
                           "step length must be positive",
                           static_cast<int>(k));
    }
    if (!(v_ref[k] >= limits.v_min)) {
      throw SmoothingError(ErrorCode::kInfeasibleSpeed,
                           "reference speed below the minimum speed",
                           static_cast<int>(k));
    }
    if (v_max_curv[k] < limits.v_min) {
      throw SmoothingError(ErrorCode::kInfeasibleSpeed,
                           "curve too tight for the minimum speed",
                           static_cast<int>(k));
    }
  }
  std::vector<double> v(count);
  for (size_t k = 0; k < count; ++k) {
    v[k] = std::min({v_ref[k], v_max_curv[k], limits.v_max});
  }
  const double accel = limits.dv_max;
  const double decel = std::fabs(limits.dv_min);
  for (size_t k = 0; k + 1 < count; ++k) {
    v[k + 1] = std::min(v[k + 1], v[k] + d_s[k] * accel / v[k]);
  }
  if (backward_pass) {
    for (size_t k = count - 1; k-- > 0;) {
      // Largest v_k with v_k - v_{k+1} <= d_s * decel / v_k.
      const double next = v[k + 1];
      const double bound =
          0.5 * (next + std::sqrt(next * next + 4.0 * d_s[k] * decel));
      v[k] = std::min(v[k], bound);
    }
  }
  SpeedProfile profile;
  profile.stations.resize(count);
  double s = 0.0;
  for (size_t k = 0; k < count; ++k) {
    SpeedStation& st = profile.stations[k];
    st.s = s;
    st.v_max = v_max_curv[k];
    st.v = v[k];
    st.limited = v[k] < v_ref[k];
    if (st.limited) ++profile.limited_count;
    s += d_s[k];
  }
  profile.v_step.resize(count - 1);
  for (size_t k = 0; k + 1 < count; ++k) {
    profile.v_step[k] = std::min(0.5 * (v[k] + v[k + 1]), v_max_curv[k]);
  }
  return profile;
}

}  // namespace dubins_smooth
