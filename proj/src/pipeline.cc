#include "dubins_smooth/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "dubins_smooth/aerobatic.h"
#include "dubins_smooth/error.h"
#include "dubins_smooth/gamma_control.h"
#include "dubins_smooth/speed_control.h"

namespace dubins_smooth {
namespace {

template <typename Fn>
auto InStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SmoothingError& e) {
    if (!e.stage().empty()) throw;
    throw e.WithStage(stage);
  }
}

// Linear interpolation of per-waypoint values at planar arc length s.
double InterpolateAlong(const std::vector<Waypoint>& waypoints,
                        const std::vector<double>& cumulative,
                        const std::vector<double>& values, double s) {
  if (s <= cumulative.front()) return values.front();
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    if (s <= cumulative[i + 1]) {
      const double len = cumulative[i + 1] - cumulative[i];
      const double t = len > 0.0 ? (s - cumulative[i]) / len : 1.0;
      return values[i] + t * (values[i + 1] - values[i]);
    }
  }
  return values.back();
}

std::vector<double> PlanarCumulative(const std::vector<Waypoint>& waypoints) {
  std::vector<double> cum(waypoints.size(), 0.0);
  for (size_t i = 1; i < waypoints.size(); ++i) {
    cum[i] = cum[i - 1] + std::hypot(waypoints[i].x - waypoints[i - 1].x,
                                     waypoints[i].y - waypoints[i - 1].y);
  }
  return cum;
}

}  // namespace

const char* PlaneName(Plane plane) {
  return plane == Plane::kXz ? "xz" : "xy";
}

void ValidateConfig(const PipelineConfig& cfg) {
  ValidateLimits(cfg.limits);
  if (!(cfg.t_s > 0.0) || !(cfg.h > 0.0)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "time step and spacing must be positive");
  }
  if (!(cfg.v_ref > 0.0)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "reference speed must be positive");
  }
  if (cfg.roll.lp_iterations < 1 || !(cfg.roll.slack_weight > 0.0)) {
    throw SmoothingError(ErrorCode::kConfig, "invalid roll LP settings");
  }
  if (!(cfg.limits.phi_max < 1.5707963267948966) ||
      !(cfg.limits.phi_min > -1.5707963267948966)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "roll limits must lie inside (-pi/2, pi/2)");
  }
}

SmoothingResult RunPlanarPipeline(const std::vector<Waypoint>& waypoints,
                                  const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  InStage("config", [&] {
    ValidateConfig(cfg);
    return 0;
  });
  const VehicleLimits& limits = cfg.limits;
  const bool tractor = cfg.model == VehicleModel::kTractor;
  if (!cfg.v_ref_profile.empty() &&
      cfg.v_ref_profile.size() != waypoints.size()) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "speed profile needs one value per waypoint", {},
                         "config");
  }
  if (!cfg.terrain_gamma.empty() &&
      cfg.terrain_gamma.size() != waypoints.size()) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "terrain slopes need one value per waypoint", {},
                         "config");
  }

  const ReferencePath path = InStage(
      "resample", [&] { return ResampleArclength(waypoints, cfg.h); });
  const int n = path.steps();
  if (n < 2) {
    throw SmoothingError(ErrorCode::kTooShort,
                         "path yields fewer than two steps", {}, "resample");
  }
  const std::vector<double> cum = PlanarCumulative(waypoints);
  std::vector<double> v_ref(n + 1, cfg.v_ref);
  if (!cfg.v_ref_profile.empty()) {
    for (int k = 0; k <= n; ++k) {
      v_ref[k] = InterpolateAlong(waypoints, cum, cfg.v_ref_profile,
                                  path.stations[k].s);
    }
  }
  for (int k = 0; k <= n; ++k) {
    if (v_ref[k] < limits.v_min || v_ref[k] > limits.v_max) {
      throw SmoothingError(ErrorCode::kInfeasibleSpeed,
                           "reference speed outside the speed limits", k,
                           "speed_reference");
    }
  }

  // Flight-path angle per step on the planar grid.
  GammaProfile gamma = InStage("gamma_control", [&] {
    std::vector<double> raw(n);
    for (int k = 0; k < n; ++k) {
      raw[k] = std::atan2(path.stations[k + 1].z - path.stations[k].z, cfg.h);
    }
    if (tractor) {
      GammaProfile profile;
      profile.gamma_bar.resize(n);
      for (int k = 0; k < n; ++k) {
        profile.gamma_bar[k] =
            cfg.terrain_gamma.empty()
                ? raw[k]
                : InterpolateAlong(waypoints, cum, cfg.terrain_gamma,
                                   path.stations[k].s + 0.5 * cfg.h);
      }
      return profile;
    }
    const std::vector<double> d_s(n, cfg.h);
    const std::vector<double> v(v_ref.begin(), v_ref.begin() + n);
    return ClampGammaSequence(raw, d_s, v, {limits});
  });

  RollLpConfig roll_cfg = cfg.roll;
  roll_cfg.model = cfg.model;
  const RollSolution roll = InStage("roll_lp", [&] {
    return SolveRoll(path, v_ref, gamma.gamma_bar, limits, roll_cfg);
  });

  // Per-step planar length and curvature of the path the LP predicts.
  const ReferencePath& ref = roll.reference;
  const int m = ref.steps();
  const std::vector<double>& v_plan = roll.v_ref;
  std::vector<double> gam = roll.gamma_bar;
  std::vector<double> length(m);
  std::vector<double> kappa(m);
  for (int k = 0; k < m; ++k) {
    const double scale =
        0.5 * ((1.0 - ref.stations[k].kappa * roll.e_y[k]) /
                   std::cos(roll.e_psi[k]) +
               (1.0 - ref.stations[k + 1].kappa * roll.e_y[k + 1]) /
                   std::cos(roll.e_psi[k + 1]));
    length[k] = ref.h * scale;
    const double v_bar = v_plan[k] * std::cos(gam[k]);
    kappa[k] = TurnRateGain(cfg.model, v_plan[k], limits) *
               std::tan(roll.phi[k]) / v_bar;
  }

  SmoothingResult result;
  result.model = cfg.model;
  PipelineMetrics& metrics = result.metrics;
  std::vector<double> v_step(m);
  std::vector<double> v_max_curv(m + 1, limits.v_max);
  InStage("speed_control", [&] {
    if (!tractor) {
      ReferencePath smoothed;
      try {
        smoothed = ResampleArclength(roll.smoothed_path, ref.h);
      } catch (const SmoothingError& e) {
        throw SmoothingError(ErrorCode::kProjectionSingular,
                             "smoothed path cannot be resampled: " +
                                 e.detail());
      }
      const int ns = smoothed.steps();
      auto at = [&](int k) {
        const int j = std::clamp(
            static_cast<int>(std::lround(static_cast<double>(k) * ns / m)), 0,
            ns);
        return j;
      };
      const std::vector<double> high =
          VMaxProfile(smoothed, limits.phi_max, limits.g, limits.v_max);
      std::vector<double> low = high;
      if (limits.phi_min < 0.0) {
        low = VMaxProfile(smoothed, -limits.phi_min, limits.g, limits.v_max);
      }
      for (int k = 0; k <= m; ++k) {
        const int j = at(k);
        v_max_curv[k] = smoothed.stations[j].kappa < 0.0 ? low[j] : high[j];
      }
    }
    if (!cfg.speed_limiting) {
      for (int k = 0; k < m; ++k) v_step[k] = v_plan[k];
      return 0;
    }
    std::vector<double> d_s(m + 1);
    for (int k = 0; k <= m; ++k) {
      const int c = std::min(k, m - 1);
      d_s[k] = length[c] / std::cos(gam[c]);
    }
    const SpeedProfile profile =
        ApplySpeedLaw(v_plan, v_max_curv, limits, d_s);
    v_step = profile.v_step;
    metrics.speed_limited_count = profile.limited_count;
    return 0;
  });

  // Final step controls that keep the predicted geometry at the new speed.
  // Each step time depends only on the already final controls of that step,
  // so the rate bounds hold for the times that are reported.
  std::vector<double> phi(m);
  std::vector<double> dt(m);
  int rate_clamps = 0;
  auto clamp_one = [&](double u, double prev, double step, double lo,
                       double hi, double rate_lo, double rate_hi, bool first) {
    double a = lo;
    double b = hi;
    if (!first) {
      a = std::max(a, prev + step * rate_lo);
      b = std::min(b, prev + step * rate_hi);
    }
    const double c = std::clamp(u, a, b);
    if (c != u) ++rate_clamps;
    return c;
  };
  for (int k = 0; k < m; ++k) {
    const bool first = k == 0;
    const double step = first ? 0.0 : dt[k - 1];
    v_step[k] = clamp_one(v_step[k], first ? 0.0 : v_step[k - 1], step,
                          limits.v_min, limits.v_max, limits.dv_min,
                          limits.dv_max, first);
    if (!tractor) {
      gam[k] = clamp_one(gam[k], first ? 0.0 : gam[k - 1], step,
                         limits.gamma_min, limits.gamma_max, limits.dgamma_min,
                         limits.dgamma_max, first);
    }
    const double v_bar = v_step[k] * std::cos(gam[k]);
    const double target = std::atan(
        kappa[k] * v_bar / TurnRateGain(cfg.model, v_step[k], limits));
    phi[k] = clamp_one(target, first ? 0.0 : phi[k - 1], step, limits.phi_min,
                       limits.phi_max, limits.dphi_min, limits.dphi_max, first);
    dt[k] = length[k] / v_bar;
  }
  metrics.rate_clamp_count = rate_clamps;

  // Validation simulation under zero-order hold per step.
  result.trajectory = InStage("simulate", [&] {
    std::vector<TrajectorySample> traj;
    traj.reserve(m + 1);
    const Station& s0 = ref.stations[0];
    AirplaneState state;
    state.x = roll.smoothed_path[0].x;
    state.y = roll.smoothed_path[0].y;
    state.z = s0.z;
    state.psi = WrapAngle(s0.psi + roll.e_psi[0]);
    double t = 0.0;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
      const int c = std::min(k, m - 1);
      traj.push_back({t, s, state.x, state.y, state.z, state.psi, gam[c],
                      phi[c], v_step[c]});
      if (k == m) break;
      const int sub = std::max(1, static_cast<int>(std::ceil(
                                      dt[k] / cfg.t_s - 1e-9)));
      const AirplaneControl control{gam[k], phi[k], v_step[k]};
      for (int i = 0; i < sub; ++i) {
        state = Rk4Step(state, control, dt[k] / sub, cfg.model, limits);
      }
      t += dt[k];
      s += length[k];
    }
    return traj;
  });

  metrics.stations = m + 1;
  metrics.slack = roll.slack;
  metrics.lp_objective = roll.objective;
  metrics.gamma_clamp_count = gamma.clamp_count;
  metrics.lp_iterations = roll.lp_iterations;
  metrics.simplex_iterations = roll.simplex_iterations;
  metrics.validity_rows = roll.validity_rows;
  for (double e : roll.e_y) {
    metrics.max_abs_e_y = std::max(metrics.max_abs_e_y, std::fabs(e));
  }
  metrics.min_v_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    metrics.max_abs_phi = std::max(metrics.max_abs_phi, std::fabs(phi[k]));
    metrics.max_abs_gamma = std::max(metrics.max_abs_gamma, std::fabs(gam[k]));
    metrics.min_v_margin =
        std::min(metrics.min_v_margin, v_max_curv[k] - v_step[k]);
  }
  for (int k = 0; k <= m; ++k) {
    const TrajectorySample& s = result.trajectory[k];
    const Projection p = ProjectPoint(path, {s.x, s.y, s.z});
    metrics.max_tracking_error =
        std::max(metrics.max_tracking_error, std::fabs(p.e_y));
    metrics.max_prediction_gap = std::max(
        metrics.max_prediction_gap,
        std::hypot(s.x - roll.smoothed_path[k].x,
                   s.y - roll.smoothed_path[k].y));
  }
  result.planning_trajectory = result.trajectory;
  result.planning_limits = limits;
  result.limits = limits;
  metrics.solve_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  return result;
}

SmoothingResult RunPipeline(const std::vector<Waypoint>& waypoints,
                            const PipelineConfig& cfg) {
  Plane plane = Plane::kXy;
  switch (cfg.aerobatic) {
    case AerobaticMode::kForceXy:
      plane = Plane::kXy;
      break;
    case AerobaticMode::kForceXz:
      plane = Plane::kXz;
      break;
    case AerobaticMode::kAuto:
      plane = InStage("plane_selection", [&] {
        return DominatingPlane(waypoints, cfg.plane_threshold);
      });
      break;
  }
  if (plane == Plane::kXz) {
    if (cfg.model == VehicleModel::kTractor) {
      throw SmoothingError(ErrorCode::kConfig,
                           "the ground vehicle cannot plan in a vertical "
                           "plane",
                           {}, "plane_selection");
    }
    return PlanAerobatic(waypoints, cfg);
  }
  return RunPlanarPipeline(waypoints, cfg);
}

FeasibilityReport CheckTrajectory(const std::vector<TrajectorySample>& traj,
                                  const VehicleLimits& limits,
                                  VehicleModel model,
                                  const CheckTolerances& tol) {
  FeasibilityReport report;
  auto fail = [&](size_t k, const std::string& what, double value) {
    report.feasible = false;
    if (report.violations.size() < 50) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "sample %zu: %s (%.9g)", k, what.c_str(),
                    value);
      report.violations.emplace_back(buf);
    }
  };
  if (traj.empty()) {
    report.feasible = false;
    report.violations.emplace_back("trajectory is empty");
    return report;
  }
  auto within = [](double v, double lo, double hi, double eps) {
    return v >= lo - eps && v <= hi + eps;
  };
  auto rate_eps = [&](double bound) {
    return tol.rate * std::max(1.0, std::fabs(bound));
  };
  const bool tractor = model == VehicleModel::kTractor;
  for (size_t k = 0; k < traj.size(); ++k) {
    const TrajectorySample& s = traj[k];
    if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y) ||
        !std::isfinite(s.z) || !std::isfinite(s.psi) ||
        !std::isfinite(s.gamma) || !std::isfinite(s.phi) ||
        !std::isfinite(s.v)) {
      fail(k, "non-finite value", 0.0);
      continue;
    }
    if (!tractor &&
        !within(s.gamma, limits.gamma_min, limits.gamma_max, tol.limit)) {
      fail(k, "flight-path angle outside limits", s.gamma);
    }
    if (!within(s.phi, limits.phi_min, limits.phi_max, tol.limit)) {
      fail(k, "roll outside limits", s.phi);
    }
    if (!within(s.v, limits.v_min, limits.v_max, tol.limit)) {
      fail(k, "speed outside limits", s.v);
    }
    if (k == 0) continue;
    const TrajectorySample& p = traj[k - 1];
    const double dt = s.t - p.t;
    if (dt < 0.0) fail(k, "time decreases", dt);
    if (s.s < p.s) fail(k, "arc length decreases", s.s - p.s);
    if (dt <= 0.0) continue;
    const double dphi = (s.phi - p.phi) / dt;
    if (!within(dphi, limits.dphi_min, limits.dphi_max,
                rate_eps(limits.dphi_max))) {
      fail(k, "roll rate outside limits", dphi);
    }
    const double dv = (s.v - p.v) / dt;
    if (!within(dv, limits.dv_min, limits.dv_max, rate_eps(limits.dv_max))) {
      fail(k, "acceleration outside limits", dv);
    }
    if (!tractor) {
      const double dgamma = (s.gamma - p.gamma) / dt;
      if (!within(dgamma, limits.dgamma_min, limits.dgamma_max,
                  rate_eps(limits.dgamma_max))) {
        fail(k, "flight-path angle rate outside limits", dgamma);
      }
    }
  }
  return report;
}

}  // namespace dubins_smooth
