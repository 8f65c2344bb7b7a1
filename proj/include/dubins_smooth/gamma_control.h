#ifndef DUBINS_SMOOTH_GAMMA_CONTROL_H_
#define DUBINS_SMOOTH_GAMMA_CONTROL_H_

#include <vector>

#include "dubins_smooth/dubins_model.h"

namespace dubins_smooth {

struct GammaStation {
  double d_s = 0.0;
  double gamma_raw = 0.0;
  double gamma_clamped = 0.0;
  bool clamped = false;
};

// N + 1 stations of raw and clamped angles and N midpoint angles.
struct GammaProfile {
  std::vector<GammaStation> stations;
  std::vector<double> gamma_bar;
  int clamp_count = 0;
};

double SamplingSpace(double t_s, double v);

double GammaRaw(double z_next, double z_k, double d_s);

double ClampRateLimit(double prev, double raw, double d_s, double v,
                      const VehicleLimits& limits);

std::vector<double> MidpointCompensation(const std::vector<double>& clamped);

// z_ref and v_ref hold N + 1 station values; the step length of station k
// is T_s * v_ref[k].
GammaProfile ComputeGammaProfile(const std::vector<double>& z_ref,
                                 const std::vector<double>& v_ref, double t_s,
                                 const VehicleLimits& limits);

// Same chain on a spatial grid. raw[k] is the angle demanded over step k,
// d_s[k] the distance used to convert rate bounds at station k and v[k] the
// speed there; all vectors hold N entries. The last demand is repeated to
// give N + 1 clamped values. limits holds one entry or one per station.
GammaProfile ClampGammaSequence(const std::vector<double>& raw,
                                const std::vector<double>& d_s,
                                const std::vector<double>& v,
                                const std::vector<VehicleLimits>& limits);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_GAMMA_CONTROL_H_
