#include "dubins_smooth/gamma_control.h"

#include <algorithm>
#include <cmath>

#include "dubins_smooth/error.h"

namespace dubins_smooth {

double SamplingSpace(double t_s, double v) {
  if (!(t_s > 0.0) || !(v > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive,
                         "sampling time and speed must be positive");
  }
  return t_s * v;
}

double GammaRaw(double z_next, double z_k, double d_s) {
  if (!(d_s > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive,
                         "sampling space must be positive");
  }
  const double dz = z_next - z_k;
  if (std::fabs(dz) > d_s) {
    throw SmoothingError(ErrorCode::kInfeasibleSlope,
                         "altitude change exceeds the distance flown");
  }
  return std::asin(dz / d_s);
}

double ClampRateLimit(double prev, double raw, double d_s, double v,
                      const VehicleLimits& limits) {
  const double down = d_s * std::fabs(limits.dgamma_min) / v;
  const double up = d_s * limits.dgamma_max / v;
  const double lo = std::max(limits.gamma_min, prev - down);
  const double hi = std::min(limits.gamma_max, prev + up);
  return std::min(std::max(raw, lo), hi);
}

std::vector<double> MidpointCompensation(const std::vector<double>& clamped) {
  if (clamped.size() < 2) {
    throw SmoothingError(ErrorCode::kTooShort,
                         "midpoint compensation needs two values");
  }
  std::vector<double> out(clamped.size() - 1);
  for (size_t k = 0; k + 1 < clamped.size(); ++k) {
    out[k] = 0.5 * (clamped[k] + clamped[k + 1]);
  }
  return out;
}

GammaProfile ClampGammaSequence(const std::vector<double>& raw,
                                const std::vector<double>& d_s,
                                const std::vector<double>& v,
                                const std::vector<VehicleLimits>& limits) {
  const size_t n = raw.size();
  if (n < 1) {
    throw SmoothingError(ErrorCode::kTooShort, "need at least one step");
  }
  if (d_s.size() != n || v.size() != n ||
      (limits.size() != 1 && limits.size() != n + 1)) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "gamma inputs have inconsistent lengths");
  }
  auto limits_at = [&](size_t k) -> const VehicleLimits& {
    return limits.size() == 1 ? limits[0] : limits[k];
  };
  GammaProfile profile;
  profile.stations.resize(n + 1);
  std::vector<double> clamped(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    const size_t src = std::min(k, n - 1);
    GammaStation& st = profile.stations[k];
    st.d_s = d_s[src];
    st.gamma_raw = raw[src];
    if (k == 0) {
      st.gamma_clamped = raw[0];
    } else {
      st.gamma_clamped = ClampRateLimit(clamped[k - 1], raw[src], d_s[src],
                                        v[src], limits_at(k));
    }
    st.clamped = st.gamma_clamped != st.gamma_raw;
    if (st.clamped) ++profile.clamp_count;
    clamped[k] = st.gamma_clamped;
  }
  profile.gamma_bar = MidpointCompensation(clamped);
  return profile;
}

GammaProfile ComputeGammaProfile(const std::vector<double>& z_ref,
                                 const std::vector<double>& v_ref, double t_s,
                                 const VehicleLimits& limits) {
  if (z_ref.size() < 2) {
    throw SmoothingError(ErrorCode::kTooShort,
                         "altitude reference needs two stations");
  }
  if (v_ref.size() != z_ref.size()) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "speed and altitude references differ in length");
  }
  const size_t n = z_ref.size() - 1;
  std::vector<double> raw(n);
  std::vector<double> d_s(n);
  std::vector<double> v(n);
  for (size_t k = 0; k < n; ++k) {
    try {
      d_s[k] = SamplingSpace(t_s, v_ref[k]);
      raw[k] = GammaRaw(z_ref[k + 1], z_ref[k], d_s[k]);
    } catch (const SmoothingError& e) {
      throw SmoothingError(e.code(), e.detail(), static_cast<int>(k));
    }
    v[k] = v_ref[k];
  }
  return ClampGammaSequence(raw, d_s, v, {limits});
}

}  // namespace dubins_smooth
