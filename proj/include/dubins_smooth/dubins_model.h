#ifndef DUBINS_SMOOTH_DUBINS_MODEL_H_
#define DUBINS_SMOOTH_DUBINS_MODEL_H_

#include <vector>

namespace dubins_smooth {

struct AirplaneState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;
};

// For the tractor model, gamma is the terrain slope and phi the steering
// angle.
struct AirplaneControl {
  double gamma = 0.0;
  double phi = 0.0;
  double v = 1.0;
};

struct SpatialState {
  double e_psi = 0.0;
  double e_y = 0.0;
};

struct VehicleLimits {
  double gamma_min = -0.35;
  double gamma_max = 0.35;
  double dgamma_min = -0.3;
  double dgamma_max = 0.3;
  double phi_min = -0.7853981633974483;
  double phi_max = 0.7853981633974483;
  double dphi_min = -0.5;
  double dphi_max = 0.5;
  double v_min = 10.0;
  double v_max = 30.0;
  double dv_min = -2.0;
  double dv_max = 2.0;
  double g = 9.81;
  double wheelbase = 2.5;
};

enum class VehicleModel {
  kAirplane,
  kTractor,
};

struct StateDerivative {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;
};

struct PlanarDerivative {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

struct SpatialDerivative {
  double e_psi = 0.0;
  double e_y = 0.0;
};

// Throws Config when a bound pair is inverted or a positive field is not.
// Only the flight-path angle limits may be infinite.
void ValidateLimits(const VehicleLimits& limits);

StateDerivative AirplaneDerivative(const AirplaneState& state,
                                   const AirplaneControl& control, double g);

PlanarDerivative PlanarDerivativeOf(const AirplaneState& state, double phi,
                                    double v, double gamma_bar, double g);

StateDerivative TractorDerivative(const AirplaneState& state,
                                  double gamma_terrain, double delta, double v,
                                  double wheelbase);

SpatialDerivative SpatialDerivativeOf(const SpatialState& sp, double phi,
                                      double v, double v_bar, double kappa,
                                      double g);

// Heading rate gain so that psi_dot = gain * tan(control).
double TurnRateGain(VehicleModel model, double v, const VehicleLimits& limits);

AirplaneState Rk4Step(const AirplaneState& state,
                      const AirplaneControl& control, double dt,
                      VehicleModel model, const VehicleLimits& limits);

// Zero-order-hold RK4 integration. Returns schedule.size() + 1 states, the
// first being the initial state.
std::vector<AirplaneState> Simulate(const AirplaneState& initial,
                                    const std::vector<AirplaneControl>& schedule,
                                    double t_s, VehicleModel model,
                                    const VehicleLimits& limits);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_DUBINS_MODEL_H_
