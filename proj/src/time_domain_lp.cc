#include "dubins_smooth/time_domain_lp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dubins_smooth/error.h"
#include "dubins_smooth/gamma_control.h"

namespace dubins_smooth {
namespace {

constexpr double kMinTrustRegion = 1e-3;
constexpr double kMaxTrustRegion = 1.0;
constexpr double kImprovementTolerance = 1e-9;

struct Nominal {
  std::vector<AirplaneState> states;
  double cost = 0.0;
};

Nominal Rollout(const AirplaneState& initial, const std::vector<double>& phi,
                const std::vector<double>& gamma_bar, double v, double t_s,
                double g, const std::vector<Waypoint>& reference) {
  Nominal out;
  out.states.reserve(phi.size() + 1);
  out.states.push_back(initial);
  for (size_t k = 0; k < phi.size(); ++k) {
    out.states.push_back(
        TimeDomainStep(out.states.back(), phi[k], v, gamma_bar[k], t_s, g));
    out.cost += std::fabs(out.states.back().x - reference[k + 1].x) +
                std::fabs(out.states.back().y - reference[k + 1].y);
  }
  return out;
}

double ClampStep(double prev, double want, double t_s,
                 const VehicleLimits& limits) {
  const double lo = std::max(limits.phi_min, prev + t_s * limits.dphi_min);
  const double hi = std::min(limits.phi_max, prev + t_s * limits.dphi_max);
  return std::clamp(want, lo, hi);
}

// Pursues the timed reference sample a few steps ahead under the roll
// limits and rates.
std::vector<double> PursuitNominal(const AirplaneState& initial,
                                   const std::vector<Waypoint>& reference,
                                   const std::vector<double>& gamma_bar,
                                   double v, double t_s, int lookahead,
                                   const VehicleLimits& limits) {
  const int n = static_cast<int>(reference.size()) - 1;
  const int ahead = std::max(1, lookahead);
  const double gain = 1.0 / (ahead * t_s);
  std::vector<double> phi(n, 0.0);
  AirplaneState s = initial;
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const Waypoint& target = reference[std::min(n, k + ahead)];
    const double dx = target.x - s.x;
    const double dy = target.y - s.y;
    double want = 0.0;
    if (std::hypot(dx, dy) > 1e-9) {
      const double turn = WrapAngle(std::atan2(dy, dx) - s.psi);
      want = std::atan(gain * turn * v / limits.g);
    }
    phi[k] = k == 0 ? std::clamp(want, limits.phi_min, limits.phi_max)
                    : ClampStep(prev, want, t_s, limits);
    prev = phi[k];
    s = TimeDomainStep(s, phi[k], v, gamma_bar[k], t_s, limits.g);
  }
  return phi;
}

struct TimedReference {
  std::vector<Waypoint> points;
  AirplaneState initial;
  std::vector<double> gamma_bar;
};

TimedReference PrepareReference(const std::vector<Waypoint>& waypoints,
                                double t_s, double v_ref,
                                const VehicleLimits& limits) {
  if (!(t_s > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive, "time step must be positive");
  }
  if (!(v_ref > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositiveSpeed,
                         "reference speed must be positive");
  }
  TimedReference out;
  out.points = SamplePolyline3d(waypoints, v_ref * t_s);
  if (out.points.size() < 3) {
    throw SmoothingError(ErrorCode::kTooShort,
                         "reference yields fewer than two time steps");
  }
  std::vector<double> z(out.points.size());
  for (size_t k = 0; k < z.size(); ++k) z[k] = out.points[k].z;
  const std::vector<double> v(z.size(), v_ref);
  out.gamma_bar = ComputeGammaProfile(z, v, t_s, limits).gamma_bar;
  out.initial.x = out.points[0].x;
  out.initial.y = out.points[0].y;
  out.initial.z = out.points[0].z;
  for (size_t k = 1; k < out.points.size(); ++k) {
    const double dx = out.points[k].x - out.points[0].x;
    const double dy = out.points[k].y - out.points[0].y;
    if (std::hypot(dx, dy) > 1e-9) {
      out.initial.psi = std::atan2(dy, dx);
      break;
    }
  }
  return out;
}

}  // namespace

AirplaneState TimeDomainStep(const AirplaneState& state, double phi, double v,
                             double gamma_bar, double t_s, double g) {
  const double omega = g / v * std::tan(phi);
  const double v_bar = v * std::cos(gamma_bar);
  const double mid = state.psi + 0.5 * t_s * omega;
  AirplaneState next;
  next.x = state.x + t_s * v_bar * std::cos(mid);
  next.y = state.y + t_s * v_bar * std::sin(mid);
  next.z = state.z + t_s * v * std::sin(gamma_bar);
  next.psi = state.psi + t_s * omega;
  return next;
}

TimeDomainProblem AssembleTimeDomainLp(const std::vector<Waypoint>& reference,
                                       const AirplaneState& initial,
                                       const std::vector<double>& phi_nominal,
                                       const std::vector<double>& gamma_bar,
                                       double v, double t_s,
                                       const VehicleLimits& limits,
                                       double trust_region) {
  const int n = static_cast<int>(phi_nominal.size());
  if (n < 1 || static_cast<int>(reference.size()) != n + 1 ||
      static_cast<int>(gamma_bar.size()) != n) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "time-domain LP inputs have inconsistent lengths");
  }
  if (!(v > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositiveSpeed,
                         "reference speed must be positive");
  }
  TimeDomainProblem problem;
  problem.steps = n;
  problem.x_const.assign(n + 1, 0.0);
  problem.y_const.assign(n + 1, 0.0);
  problem.x_coef.assign(n + 1, std::vector<double>(n, 0.0));
  problem.y_coef.assign(n + 1, std::vector<double>(n, 0.0));

  // Nominal trajectory and heading sensitivities.
  std::vector<double> psi_coef(n, 0.0);
  AirplaneState s = initial;
  std::vector<double> x_hat(n + 1), y_hat(n + 1);
  x_hat[0] = s.x;
  y_hat[0] = s.y;
  for (int k = 0; k < n; ++k) {
    const double phi = phi_nominal[k];
    const double c = std::cos(phi);
    const double slope = limits.g / v / (c * c);
    const double omega = limits.g / v * std::tan(phi);
    const double v_bar = v * std::cos(gamma_bar[k]);
    const double mid = s.psi + 0.5 * t_s * omega;
    const double sx = -t_s * v_bar * std::sin(mid);
    const double sy = t_s * v_bar * std::cos(mid);
    std::vector<double>& nx = problem.x_coef[k + 1];
    std::vector<double>& ny = problem.y_coef[k + 1];
    const std::vector<double>& px = problem.x_coef[k];
    const std::vector<double>& py = problem.y_coef[k];
    for (int j = 0; j < k; ++j) {
      nx[j] = px[j] + sx * psi_coef[j];
      ny[j] = py[j] + sy * psi_coef[j];
    }
    nx[k] = sx * 0.5 * t_s * slope;
    ny[k] = sy * 0.5 * t_s * slope;
    psi_coef[k] = t_s * slope;
    s = TimeDomainStep(s, phi, v, gamma_bar[k], t_s, limits.g);
    x_hat[k + 1] = s.x;
    y_hat[k + 1] = s.y;
  }
  for (int k = 0; k <= n; ++k) {
    double cx = x_hat[k];
    double cy = y_hat[k];
    for (int j = 0; j < n; ++j) {
      cx -= problem.x_coef[k][j] * phi_nominal[j];
      cy -= problem.y_coef[k][j] * phi_nominal[j];
    }
    problem.x_const[k] = cx;
    problem.y_const[k] = cy;
  }

  LinearProgram lp = LinearProgram::Create(2 * n, 0);
  for (int k = 0; k < n; ++k) {
    lp.lower[k] = std::max(limits.phi_min, phi_nominal[k] - trust_region);
    lp.upper[k] = std::min(limits.phi_max, phi_nominal[k] + trust_region);
    lp.c[n + k] = 1.0;
  }
  // t_k >= sx * (x_k - x_ref) + sy * (y_k - y_ref) for all sign pairs.
  for (int k = 1; k <= n; ++k) {
    const double dx0 = problem.x_const[k] - reference[k].x;
    const double dy0 = problem.y_const[k] - reference[k].y;
    for (const double sx : {1.0, -1.0}) {
      for (const double sy : {1.0, -1.0}) {
        const int r = lp.AddRow(-(sx * dx0 + sy * dy0));
        for (int j = 0; j < n; ++j) {
          lp.A(r, j) = sx * problem.x_coef[k][j] + sy * problem.y_coef[k][j];
        }
        lp.A(r, n + k - 1) = -1.0;
      }
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    int r = lp.AddRow(t_s * limits.dphi_max);
    lp.A(r, k + 1) = 1.0;
    lp.A(r, k) = -1.0;
    r = lp.AddRow(-t_s * limits.dphi_min);
    lp.A(r, k + 1) = -1.0;
    lp.A(r, k) = 1.0;
  }
  problem.lp = std::move(lp);
  return problem;
}

LinearProgram BuildTimeDomainLp(const std::vector<Waypoint>& waypoints,
                                double t_s, double v_ref,
                                const VehicleLimits& limits) {
  ValidateLimits(limits);
  const TimedReference ref = PrepareReference(waypoints, t_s, v_ref, limits);
  const TimeDomainConfig defaults;
  const std::vector<double> nominal =
      PursuitNominal(ref.initial, ref.points, ref.gamma_bar, v_ref, t_s,
                     defaults.lookahead, limits);
  return AssembleTimeDomainLp(ref.points, ref.initial, nominal, ref.gamma_bar,
                              v_ref, t_s, limits)
      .lp;
}

TimeDomainResult SolveTimeDomain(const std::vector<Waypoint>& waypoints,
                                 const VehicleLimits& limits,
                                 const TimeDomainConfig& cfg) {
  ValidateLimits(limits);
  if (cfg.max_rounds < 1 || !(cfg.trust_region > 0.0)) {
    throw SmoothingError(ErrorCode::kConfig,
                         "invalid time-domain configuration");
  }
  if (cfg.v_ref < limits.v_min || cfg.v_ref > limits.v_max) {
    throw SmoothingError(ErrorCode::kInfeasibleSpeed,
                         "reference speed outside the speed limits");
  }
  const TimedReference ref =
      PrepareReference(waypoints, cfg.t_s, cfg.v_ref, limits);
  const double v = cfg.v_ref;
  TimeDomainResult out;
  out.reference = ref.points;
  std::vector<double> phi = PursuitNominal(ref.initial, ref.points,
                                           ref.gamma_bar, v, cfg.t_s,
                                           cfg.lookahead, limits);
  double cost = Rollout(ref.initial, phi, ref.gamma_bar, v, cfg.t_s, limits.g,
                        ref.points)
                    .cost;
  out.nominal_cost = cost;
  double radius = std::min(cfg.trust_region, kMaxTrustRegion);
  for (int round = 0; round < cfg.max_rounds && radius >= kMinTrustRegion;
       ++round) {
    const TimeDomainProblem problem =
        AssembleTimeDomainLp(ref.points, ref.initial, phi, ref.gamma_bar, v,
                             cfg.t_s, limits, radius);
    const LpSolution sol = Solve(problem.lp, cfg.solver);
    ++out.lp_solves;
    out.simplex_iterations += sol.iterations;
    if (sol.status != LpStatus::kOptimal) {
      throw SmoothingError(ErrorCode::kLpFailed,
                           std::string("time-domain LP returned ") +
                               LpStatusName(sol.status));
    }
    std::vector<double> candidate(sol.x.begin(),
                                  sol.x.begin() + problem.steps);
    for (int k = 0; k < problem.steps; ++k) {
      candidate[k] = std::clamp(candidate[k], limits.phi_min, limits.phi_max);
    }
    const double trial = Rollout(ref.initial, candidate, ref.gamma_bar, v,
                                 cfg.t_s, limits.g, ref.points)
                             .cost;
    if (trial < cost - kImprovementTolerance * std::max(1.0, cost)) {
      phi = std::move(candidate);
      cost = trial;
      radius = std::min(kMaxTrustRegion, 1.5 * radius);
    } else {
      radius *= 0.5;
    }
  }
  out.tracking_cost = cost;
  out.controls.resize(phi.size());
  for (size_t k = 0; k < phi.size(); ++k) {
    out.controls[k] = {ref.gamma_bar[k], phi[k], v};
  }
  out.states = Simulate(ref.initial, out.controls, cfg.t_s,
                        VehicleModel::kAirplane, limits);
  return out;
}

}  // namespace dubins_smooth
