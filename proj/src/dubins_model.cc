#include "dubins_smooth/dubins_model.h"

#include <cmath>

#include "dubins_smooth/error.h"
#include "dubins_smooth/geometry.h"

namespace dubins_smooth {
namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void CheckAngle(double angle, const char* name) {
  if (!(std::fabs(angle) < kHalfPi)) {
    throw SmoothingError(ErrorCode::kSingularControl,
                         std::string(name) + " must satisfy |angle| < pi/2");
  }
}

void CheckSpeed(double v) {
  if (!(v > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositiveSpeed,
                         "airspeed must be positive");
  }
}

void CheckPair(double lo, double hi, const char* name,
               bool allow_infinite = false) {
  const bool finite = std::isfinite(lo) && std::isfinite(hi);
  if (!(lo < hi) || (!finite && !allow_infinite)) {
    throw SmoothingError(ErrorCode::kConfig,
                         std::string("invalid bound pair for ") + name);
  }
}

StateDerivative Derivative(const AirplaneState& s, const AirplaneControl& c,
                           VehicleModel model, const VehicleLimits& limits) {
  if (model == VehicleModel::kTractor) {
    return TractorDerivative(s, c.gamma, c.phi, c.v, limits.wheelbase);
  }
  return AirplaneDerivative(s, c, limits.g);
}

AirplaneState Advance(const AirplaneState& s, const StateDerivative& d,
                      double dt) {
  return {s.x + dt * d.x, s.y + dt * d.y, s.z + dt * d.z, s.psi + dt * d.psi};
}

}  // namespace

void ValidateLimits(const VehicleLimits& limits) {
  CheckPair(limits.gamma_min, limits.gamma_max, "gamma", true);
  CheckPair(limits.dgamma_min, limits.dgamma_max, "gamma rate");
  CheckPair(limits.phi_min, limits.phi_max, "phi");
  CheckPair(limits.dphi_min, limits.dphi_max, "phi rate");
  CheckPair(limits.v_min, limits.v_max, "speed");
  CheckPair(limits.dv_min, limits.dv_max, "acceleration");
  if (!(limits.g > 0.0) || !(limits.v_min > 0.0) ||
      !(limits.wheelbase > 0.0)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "g, v_min and wheelbase must be positive");
  }
}

StateDerivative AirplaneDerivative(const AirplaneState& state,
                                   const AirplaneControl& control, double g) {
  CheckAngle(control.gamma, "gamma");
  CheckAngle(control.phi, "phi");
  CheckSpeed(control.v);
  const double horizontal = control.v * std::cos(control.gamma);
  return {horizontal * std::cos(state.psi), horizontal * std::sin(state.psi),
          control.v * std::sin(control.gamma),
          g / control.v * std::tan(control.phi)};
}

PlanarDerivative PlanarDerivativeOf(const AirplaneState& state, double phi,
                                    double v, double gamma_bar, double g) {
  CheckAngle(gamma_bar, "gamma");
  CheckAngle(phi, "phi");
  CheckSpeed(v);
  const double v_bar = v * std::cos(gamma_bar);
  return {v_bar * std::cos(state.psi), v_bar * std::sin(state.psi),
          g / v * std::tan(phi)};
}

StateDerivative TractorDerivative(const AirplaneState& state,
                                  double gamma_terrain, double delta, double v,
                                  double wheelbase) {
  CheckAngle(delta, "delta");
  CheckAngle(gamma_terrain, "gamma");
  CheckSpeed(v);
  if (!(wheelbase > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive,
                         "wheelbase must be positive");
  }
  const double horizontal = v * std::cos(gamma_terrain);
  return {horizontal * std::cos(state.psi), horizontal * std::sin(state.psi),
          v * std::sin(gamma_terrain), v / wheelbase * std::tan(delta)};
}

SpatialDerivative SpatialDerivativeOf(const SpatialState& sp, double phi,
                                      double v, double v_bar, double kappa,
                                      double g) {
  const double scale = 1.0 - kappa * sp.e_y;
  if (!(scale > 0.0)) {
    throw SmoothingError(ErrorCode::kProjectionSingular,
                         "lateral offset reaches the curvature center");
  }
  CheckAngle(sp.e_psi, "e_psi");
  CheckAngle(phi, "phi");
  CheckSpeed(v);
  CheckSpeed(v_bar);
  return {scale * g * std::tan(phi) / (v * v_bar * std::cos(sp.e_psi)) - kappa,
          scale * std::tan(sp.e_psi)};
}

double TurnRateGain(VehicleModel model, double v, const VehicleLimits& limits) {
  return model == VehicleModel::kTractor ? v / limits.wheelbase : limits.g / v;
}

AirplaneState Rk4Step(const AirplaneState& state,
                      const AirplaneControl& control, double dt,
                      VehicleModel model, const VehicleLimits& limits) {
  const StateDerivative k1 = Derivative(state, control, model, limits);
  const StateDerivative k2 =
      Derivative(Advance(state, k1, 0.5 * dt), control, model, limits);
  const StateDerivative k3 =
      Derivative(Advance(state, k2, 0.5 * dt), control, model, limits);
  const StateDerivative k4 =
      Derivative(Advance(state, k3, dt), control, model, limits);
  AirplaneState next;
  next.x = state.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  next.y = state.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
  next.z = state.z + dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
  next.psi = WrapAngle(state.psi +
                       dt / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi));
  return next;
}

std::vector<AirplaneState> Simulate(const AirplaneState& initial,
                                    const std::vector<AirplaneControl>& schedule,
                                    double t_s, VehicleModel model,
                                    const VehicleLimits& limits) {
  if (schedule.empty()) {
    throw SmoothingError(ErrorCode::kTooShort, "control schedule is empty");
  }
  if (!(t_s > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive, "step must be positive");
  }
  std::vector<AirplaneState> states;
  states.reserve(schedule.size() + 1);
  AirplaneState s = initial;
  s.psi = WrapAngle(s.psi);
  states.push_back(s);
  for (const AirplaneControl& c : schedule) {
    s = Rk4Step(s, c, t_s, model, limits);
    states.push_back(s);
  }
  return states;
}

}  // namespace dubins_smooth
