#ifndef DUBINS_SMOOTH_ROLL_LP_H_
#define DUBINS_SMOOTH_ROLL_LP_H_

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"
#include "dubins_smooth/lp_solver.h"

namespace dubins_smooth {

enum class RollVariant {
  kLp1,
  kLp2,
};

struct RollLpConfig {
  RollVariant variant = RollVariant::kLp1;
  double slack_weight = 1e6;
  int lp_iterations = 1;
  double initial_e_y = 0.0;
  double initial_e_psi = 0.0;
  std::optional<double> initial_phi;
  // Stations whose predicted offset would bring 1 - kappa * e_y below this
  // margin receive a hard row keeping it above.
  double projection_margin = 0.1;
  VehicleModel model = VehicleModel::kAirplane;
  SimplexOptions solver;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

// State order is (e_psi, e_y).
struct SpatialLinearModel {
  Matrix2 a{};
  Vector2 b{};
  Vector2 w{};
};

// Jacobians at e_psi = e_y = 0 and phi = 0.
SpatialLinearModel LinearizeSpatial(double kappa, double v, double v_bar,
                                    double g);

// Jacobians at e_psi = e_y = 0 and control = control_ref for a heading rate
// gain * tan(control).
SpatialLinearModel LinearizeSpatialAbout(double kappa, double gain,
                                         double v_bar, double control_ref);

SpatialLinearModel Discretize(const SpatialLinearModel& model, double d_s);

// Lateral offsets as affine functions of the controls:
// e_y[k] = e_y_const[k] + sum_j e_y_coef[k][j] * phi[j], k = 0..N.
struct RollLpProblem {
  LinearProgram lp;
  int steps = 0;
  std::vector<double> e_y_const;
  std::vector<std::vector<double>> e_y_coef;
  std::vector<double> e_psi_const;
  std::vector<std::vector<double>> e_psi_coef;
};

// v_ref holds N + 1 station speeds and gamma_bar N step angles. phi_ref is
// the linearization point per step (zeros when empty). validity_stations
// lists stations that receive a projection-validity row.
RollLpProblem AssembleRollLp(const ReferencePath& path,
                             const std::vector<double>& v_ref,
                             const std::vector<double>& gamma_bar,
                             const VehicleLimits& limits,
                             const RollLpConfig& cfg,
                             const std::vector<double>& phi_ref = {},
                             const std::set<int>& validity_stations = {});

LinearProgram BuildLp(const ReferencePath& path,
                      const std::vector<double>& v_ref,
                      const std::vector<double>& gamma_bar,
                      const VehicleLimits& limits, const RollLpConfig& cfg);

struct RollSolution {
  std::vector<double> phi;
  std::vector<double> e_y;
  std::vector<double> e_psi;
  double slack = 0.0;
  double objective = 0.0;
  LpStatus lp_status = LpStatus::kInfeasible;
  // Reference of the last LP iteration and its reconstruction.
  ReferencePath reference;
  std::vector<double> v_ref;
  std::vector<double> gamma_bar;
  std::vector<Waypoint> smoothed_path;
  int lp_iterations = 0;
  int simplex_iterations = 0;
  int validity_rows = 0;
};

RollSolution SolveRoll(const ReferencePath& path,
                       const std::vector<double>& v_ref,
                       const std::vector<double>& gamma_bar,
                       const VehicleLimits& limits, const RollLpConfig& cfg);

// Flies the planar model along the reference with controls held per station
// of the projected arc length and returns the largest gap between the
// simulated and predicted lateral offsets.
double ClosedLoopLateralError(const RollSolution& solution,
                              const VehicleLimits& limits, VehicleModel model,
                              double dt);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_ROLL_LP_H_
