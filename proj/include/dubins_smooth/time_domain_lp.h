#ifndef DUBINS_SMOOTH_TIME_DOMAIN_LP_H_
#define DUBINS_SMOOTH_TIME_DOMAIN_LP_H_

#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"
#include "dubins_smooth/lp_solver.h"

namespace dubins_smooth {

struct TimeDomainConfig {
  double t_s = 0.5;
  double v_ref = 20.0;
  // Sequential LP rounds around the latest accepted roll sequence.
  int max_rounds = 20;
  // Initial half width of the roll box around the linearization point.
  double trust_region = 0.3;
  // Reference samples ahead of the current one that the nominal pursues.
  int lookahead = 3;
  SimplexOptions solver;
};

// Positions as affine functions of the roll sequence:
// x[k] = x_const[k] + sum_j x_coef[k][j] * phi[j], k = 0..N.
struct TimeDomainProblem {
  LinearProgram lp;
  int steps = 0;
  std::vector<double> x_const;
  std::vector<std::vector<double>> x_coef;
  std::vector<double> y_const;
  std::vector<std::vector<double>> y_coef;
};

// One discrete step of the planar model with the heading advanced at the
// step midpoint.
AirplaneState TimeDomainStep(const AirplaneState& state, double phi, double v,
                             double gamma_bar, double t_s, double g);

// reference holds N + 1 timed samples, phi_nominal and gamma_bar N entries.
// Roll bounds are intersected with phi_nominal +/- trust_region.
TimeDomainProblem AssembleTimeDomainLp(const std::vector<Waypoint>& reference,
                                       const AirplaneState& initial,
                                       const std::vector<double>& phi_nominal,
                                       const std::vector<double>& gamma_bar,
                                       double v, double t_s,
                                       const VehicleLimits& limits,
                                       double trust_region = kLpInfinity);

// Samples the waypoints every v_ref * t_s meters, flies a pursuit nominal
// and linearizes about it without a trust region.
LinearProgram BuildTimeDomainLp(const std::vector<Waypoint>& waypoints,
                                double t_s, double v_ref,
                                const VehicleLimits& limits);

struct TimeDomainResult {
  std::vector<Waypoint> reference;
  std::vector<AirplaneControl> controls;
  // RK4 states, one more than controls.
  std::vector<AirplaneState> states;
  // Sum of |x - x_ref| + |y - y_ref| of the discrete model.
  double tracking_cost = 0.0;
  double nominal_cost = 0.0;
  int lp_solves = 0;
  int simplex_iterations = 0;
};

TimeDomainResult SolveTimeDomain(const std::vector<Waypoint>& waypoints,
                                 const VehicleLimits& limits,
                                 const TimeDomainConfig& cfg);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_TIME_DOMAIN_LP_H_
