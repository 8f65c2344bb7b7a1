#include "dubins_smooth/roll_lp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dubins_smooth/error.h"

namespace dubins_smooth {
namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr int kMaxValidityRounds = 25;
constexpr double kCurvatureEpsilon = 1e-12;

void CheckConfig(const RollLpConfig& cfg) {
  if (!(cfg.slack_weight > 0.0) || cfg.lp_iterations < 1 ||
      !(cfg.projection_margin >= 0.0 && cfg.projection_margin < 1.0)) {
    throw SmoothingError(ErrorCode::kConfig, "invalid roll LP configuration");
  }
}

void CheckHeadingSteps(const ReferencePath& path) {
  for (int k = 0; k < path.steps(); ++k) {
    if (std::fabs(path.stations[k].kappa * path.h) >= kHalfPi) {
      throw SmoothingError(ErrorCode::kProjectionSingular,
                           "heading turns by a right angle or more within "
                           "one station",
                           k);
    }
  }
}

// Index of the step of a polyline with cumulative lengths cum that contains
// arc length s.
int StepAt(const std::vector<double>& cum, double s, int steps) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), s);
  const int idx = static_cast<int>(it - cum.begin()) - 1;
  return std::clamp(idx, 0, steps - 1);
}

std::vector<double> CumulativePlanar(const std::vector<Waypoint>& points) {
  std::vector<double> cum(points.size(), 0.0);
  for (size_t k = 1; k < points.size(); ++k) {
    cum[k] = cum[k - 1] + std::hypot(points[k].x - points[k - 1].x,
                                     points[k].y - points[k - 1].y);
  }
  return cum;
}

template <typename T>
std::vector<T> MapByFraction(const std::vector<T>& values, int old_count,
                             const ReferencePath& fresh, int new_count) {
  // values has old_count entries over the old grid; returns new_count
  // entries sampled at the same fraction of the path.
  std::vector<T> out(new_count);
  for (int j = 0; j < new_count; ++j) {
    const double frac =
        new_count > 1 ? static_cast<double>(j) / (new_count - 1) : 0.0;
    const int idx = std::clamp(
        static_cast<int>(std::lround(frac * (old_count - 1))), 0,
        old_count - 1);
    out[j] = values[idx];
  }
  (void)fresh;
  return out;
}

double GainFor(VehicleModel model, double v, const VehicleLimits& limits) {
  return TurnRateGain(model, v, limits);
}

}  // namespace

SpatialLinearModel LinearizeSpatial(double kappa, double v, double v_bar,
                                    double g) {
  if (!(v > 0.0) || !(v_bar > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositiveSpeed,
                         "speeds must be positive");
  }
  return LinearizeSpatialAbout(kappa, g / v, v_bar, 0.0);
}

SpatialLinearModel LinearizeSpatialAbout(double kappa, double gain,
                                         double v_bar, double control_ref) {
  if (!(v_bar > 0.0) || !(gain > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositiveSpeed,
                         "speeds must be positive");
  }
  SpatialLinearModel m;
  m.a = {{{0.0, 0.0}, {1.0, 0.0}}};
  const double c = std::cos(control_ref);
  const double b = gain / v_bar / (c * c);
  m.b = {b, 0.0};
  m.w = {gain * std::tan(control_ref) / v_bar - b * control_ref - kappa, 0.0};
  return m;
}

SpatialLinearModel Discretize(const SpatialLinearModel& model, double d_s) {
  // exp(A d) = I + A d, and the input integral is (I d + A d^2 / 2).
  SpatialLinearModel out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.a[i][j] = (i == j ? 1.0 : 0.0) + model.a[i][j] * d_s;
    }
  }
  const double half = 0.5 * d_s * d_s;
  for (int i = 0; i < 2; ++i) {
    double bi = d_s * model.b[i];
    double wi = d_s * model.w[i];
    for (int j = 0; j < 2; ++j) {
      bi += half * model.a[i][j] * model.b[j];
      wi += half * model.a[i][j] * model.w[j];
    }
    out.b[i] = bi;
    out.w[i] = wi;
  }
  return out;
}

RollLpProblem AssembleRollLp(const ReferencePath& path,
                             const std::vector<double>& v_ref,
                             const std::vector<double>& gamma_bar,
                             const VehicleLimits& limits,
                             const RollLpConfig& cfg,
                             const std::vector<double>& phi_ref,
                             const std::set<int>& validity_stations) {
  CheckConfig(cfg);
  const int n_steps = path.steps();
  if (n_steps < 2 || static_cast<int>(v_ref.size()) != n_steps + 1 ||
      static_cast<int>(gamma_bar.size()) != n_steps ||
      (!phi_ref.empty() && static_cast<int>(phi_ref.size()) != n_steps)) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "roll LP inputs have inconsistent lengths");
  }
  const int n = n_steps;
  RollLpProblem problem;
  problem.steps = n;
  problem.e_y_const.assign(n + 1, 0.0);
  problem.e_psi_const.assign(n + 1, 0.0);
  problem.e_y_coef.assign(n + 1, std::vector<double>(n, 0.0));
  problem.e_psi_coef.assign(n + 1, std::vector<double>(n, 0.0));
  problem.e_y_const[0] = cfg.initial_e_y;
  problem.e_psi_const[0] = cfg.initial_e_psi;
  for (int k = 0; k < n; ++k) {
    const double v = v_ref[k];
    const double v_bar = v * std::cos(gamma_bar[k]);
    const double gain = GainFor(cfg.model, v, limits);
    const double ref = phi_ref.empty() ? 0.0 : phi_ref[k];
    SpatialLinearModel cont;
    try {
      cont = LinearizeSpatialAbout(path.stations[k].kappa, gain, v_bar, ref);
    } catch (const SmoothingError& e) {
      throw SmoothingError(e.code(), e.detail(), k);
    }
    const SpatialLinearModel d = Discretize(cont, path.h);
    const std::vector<double>& gp = problem.e_psi_coef[k];
    const std::vector<double>& gy = problem.e_y_coef[k];
    std::vector<double>& np = problem.e_psi_coef[k + 1];
    std::vector<double>& ny = problem.e_y_coef[k + 1];
    for (int j = 0; j < k; ++j) {
      np[j] = d.a[0][0] * gp[j] + d.a[0][1] * gy[j];
      ny[j] = d.a[1][0] * gp[j] + d.a[1][1] * gy[j];
    }
    np[k] = d.b[0];
    ny[k] = d.b[1];
    const double cp = problem.e_psi_const[k];
    const double cy = problem.e_y_const[k];
    problem.e_psi_const[k + 1] = d.a[0][0] * cp + d.a[0][1] * cy + d.w[0];
    problem.e_y_const[k + 1] = d.a[1][0] * cp + d.a[1][1] * cy + d.w[1];
  }

  const bool lp2 = cfg.variant == RollVariant::kLp2;
  const int num_vars = 2 * n + (lp2 ? 1 : 0);
  LinearProgram lp = LinearProgram::Create(num_vars, 0);
  for (int k = 0; k < n; ++k) {
    lp.lower[k] = limits.phi_min;
    lp.upper[k] = limits.phi_max;
    lp.c[n + k] = 1.0;
  }
  if (cfg.initial_phi) {
    lp.lower[0] = *cfg.initial_phi;
    lp.upper[0] = *cfg.initial_phi;
  }
  if (lp2) lp.c[2 * n] = cfg.slack_weight;
  for (int k = 1; k <= n; ++k) {
    const std::vector<double>& coef = problem.e_y_coef[k];
    const double cy = problem.e_y_const[k];
    int r = lp.AddRow(-cy);
    for (int j = 0; j < n; ++j) lp.A(r, j) = coef[j];
    lp.A(r, n + k - 1) = -1.0;
    r = lp.AddRow(cy);
    for (int j = 0; j < n; ++j) lp.A(r, j) = -coef[j];
    lp.A(r, n + k - 1) = -1.0;
  }
  for (int k = 0; k + 1 < n; ++k) {
    const double dt = path.h / v_ref[k];
    int r = lp.AddRow(dt * limits.dphi_max);
    lp.A(r, k + 1) = 1.0;
    lp.A(r, k) = -1.0;
    r = lp.AddRow(-dt * limits.dphi_min);
    lp.A(r, k + 1) = -1.0;
    lp.A(r, k) = 1.0;
  }
  if (lp2) {
    for (int k = 1; k <= n; ++k) {
      const int r = lp.AddRow(-problem.e_y_const[k]);
      for (int j = 0; j < n; ++j) lp.A(r, j) = problem.e_y_coef[k][j];
      lp.A(r, 2 * n) = -1.0;
    }
  }
  for (int k : validity_stations) {
    if (k < 1 || k > n) continue;
    const double kappa = path.stations[k].kappa;
    if (std::fabs(kappa) <= kCurvatureEpsilon) continue;
    const int r =
        lp.AddRow(1.0 - cfg.projection_margin - kappa * problem.e_y_const[k]);
    for (int j = 0; j < n; ++j) lp.A(r, j) = kappa * problem.e_y_coef[k][j];
  }
  problem.lp = std::move(lp);
  return problem;
}

LinearProgram BuildLp(const ReferencePath& path,
                      const std::vector<double>& v_ref,
                      const std::vector<double>& gamma_bar,
                      const VehicleLimits& limits, const RollLpConfig& cfg) {
  return AssembleRollLp(path, v_ref, gamma_bar, limits, cfg).lp;
}

RollSolution SolveRoll(const ReferencePath& path,
                       const std::vector<double>& v_ref,
                       const std::vector<double>& gamma_bar,
                       const VehicleLimits& limits, const RollLpConfig& cfg) {
  CheckConfig(cfg);
  RollSolution out;
  ReferencePath reference = path;
  std::vector<double> v = v_ref;
  std::vector<double> gam = gamma_bar;
  std::vector<double> phi_ref;
  RollLpConfig iter_cfg = cfg;
  for (int it = 0; it < cfg.lp_iterations; ++it) {
    CheckHeadingSteps(reference);
    const int n = reference.steps();
    std::set<int> validity;
    RollLpProblem problem;
    LpSolution sol;
    for (int round = 0;; ++round) {
      problem = AssembleRollLp(reference, v, gam, limits, iter_cfg, phi_ref,
                               validity);
      sol = Solve(problem.lp, cfg.solver);
      out.simplex_iterations += sol.iterations;
      if (sol.status != LpStatus::kOptimal) {
        if (sol.status == LpStatus::kInfeasible && !validity.empty()) {
          throw SmoothingError(ErrorCode::kProjectionSingular,
                               "no roll sequence keeps the path on the near "
                               "side of the curvature centers",
                               *validity.begin());
        }
        throw SmoothingError(ErrorCode::kLpFailed,
                             std::string("roll LP returned ") +
                                 LpStatusName(sol.status));
      }
      bool added = false;
      for (int k = 1; k <= n; ++k) {
        double ey = problem.e_y_const[k];
        for (int j = 0; j < n; ++j) ey += problem.e_y_coef[k][j] * sol.x[j];
        const double kappa = reference.stations[k].kappa;
        if (1.0 - kappa * ey < cfg.projection_margin - 1e-9 &&
            std::fabs(kappa) > kCurvatureEpsilon && !validity.count(k)) {
          validity.insert(k);
          added = true;
        }
      }
      if (!added) break;
      if (round + 1 >= kMaxValidityRounds) {
        throw SmoothingError(ErrorCode::kProjectionSingular,
                             "projection validity could not be enforced");
      }
    }
    out.phi.assign(sol.x.begin(), sol.x.begin() + n);
    out.slack = cfg.variant == RollVariant::kLp2 ? sol.x[2 * n] : 0.0;
    out.objective = sol.objective;
    out.lp_status = sol.status;
    out.validity_rows = static_cast<int>(validity.size());
    out.e_y.assign(n + 1, 0.0);
    out.e_psi.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      double ey = problem.e_y_const[k];
      double ep = problem.e_psi_const[k];
      for (int j = 0; j < n; ++j) {
        ey += problem.e_y_coef[k][j] * out.phi[j];
        ep += problem.e_psi_coef[k][j] * out.phi[j];
      }
      out.e_y[k] = ey;
      out.e_psi[k] = ep;
    }
    out.smoothed_path.clear();
    for (int k = 0; k <= n; ++k) {
      const Station& st = reference.stations[k];
      if (!(1.0 - st.kappa * out.e_y[k] > 0.0)) {
        throw SmoothingError(ErrorCode::kProjectionSingular,
                             "smoothed path folds over the reference", k);
      }
      out.smoothed_path.push_back({st.x + out.e_y[k] * st.normal.x,
                                   st.y + out.e_y[k] * st.normal.y, st.z});
    }
    out.reference = reference;
    out.v_ref = v;
    out.gamma_bar = gam;
    out.lp_iterations = it + 1;
    if (it + 1 == cfg.lp_iterations) break;

    ReferencePath fresh;
    try {
      fresh = ResampleArclength(out.smoothed_path, reference.h);
    } catch (const SmoothingError& e) {
      throw SmoothingError(ErrorCode::kProjectionSingular,
                           "smoothed path cannot be resampled: " + e.detail());
    }
    const int m = fresh.steps();
    if (m < 2) {
      throw SmoothingError(ErrorCode::kDegeneratePath,
                           "smoothed path is shorter than two stations");
    }
    const std::vector<double> cum = CumulativePlanar(out.smoothed_path);
    phi_ref.assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
      phi_ref[j] = out.phi[StepAt(cum, fresh.stations[j].s, n)];
    }
    v = MapByFraction(v, n + 1, fresh, m + 1);
    gam = MapByFraction(gam, n, fresh, m);
    reference = std::move(fresh);
    iter_cfg.initial_e_y = 0.0;
    iter_cfg.initial_e_psi = 0.0;
  }
  return out;
}

double ClosedLoopLateralError(const RollSolution& solution,
                              const VehicleLimits& limits, VehicleModel model,
                              double dt) {
  const ReferencePath& ref = solution.reference;
  const std::vector<Station>& st = ref.stations;
  const int n = ref.steps();
  const Station& s0 = st[0];
  double x = s0.x + solution.e_y[0] * s0.normal.x;
  double y = s0.y + solution.e_y[0] * s0.normal.y;
  double psi = s0.psi + solution.e_psi[0];
  int hint = 0;
  double worst = 0.0;
  const long max_steps =
      static_cast<long>(10.0 * PathLength(ref) / (limits.v_min * dt)) + 1000;
  for (long iter = 0; iter < max_steps; ++iter) {
    double best = 1e300;
    double s_proj = 0.0;
    double e_y = 0.0;
    for (int k = std::max(0, hint - 3); k < std::min(n, hint + 4); ++k) {
      const double dx = st[k + 1].x - st[k].x;
      const double dy = st[k + 1].y - st[k].y;
      const double len2 = dx * dx + dy * dy;
      double t = len2 > 0.0 ? ((x - st[k].x) * dx + (y - st[k].y) * dy) / len2
                            : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double fx = st[k].x + t * dx;
      const double fy = st[k].y + t * dy;
      const double d = std::hypot(x - fx, y - fy);
      if (d < best) {
        best = d;
        s_proj = st[k].s + t * ref.h;
        const double cross = dx * (y - st[k].y) - dy * (x - st[k].x);
        e_y = cross >= 0.0 ? d : -d;
        hint = k;
      }
    }
    const int k = static_cast<int>(std::floor(s_proj / ref.h + 1e-9));
    if (k >= n) break;
    const double frac = s_proj / ref.h - k;
    const double predicted =
        solution.e_y[k] + frac * (solution.e_y[k + 1] - solution.e_y[k]);
    worst = std::max(worst, std::fabs(e_y - predicted));
    const double v = solution.v_ref[k];
    const double v_bar = v * std::cos(solution.gamma_bar[k]);
    const double omega = TurnRateGain(model, v, limits) *
                         std::tan(solution.phi[k]);
    const double mid = psi + 0.5 * dt * omega;
    x += dt * v_bar * std::cos(mid);
    y += dt * v_bar * std::sin(mid);
    psi += dt * omega;
  }
  return worst;
}

}  // namespace dubins_smooth
