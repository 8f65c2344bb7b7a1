#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "dubins_smooth/aerobatic.h"
#include "dubins_smooth/error.h"
#include "dubins_smooth/io.h"
#include "dubins_smooth/pipeline.h"
#include "dubins_smooth/time_domain_lp.h"

namespace dubins_smooth {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

struct SmoothFlags {
  std::string input;
  std::string out = "out";
  std::string config;
  std::string limits;
  std::string variant;
  std::string model;
  std::string aerobatic;
  std::string batch;
  double t_s = 0.0;
  double h = 0.0;
  double v_ref = 0.0;
  int iterations = 0;
  int jobs = 0;
  bool no_speed_limit = false;
  bool plots = false;
};

void WriteErrorReport(const std::string& dir, const SmoothingError& e) {
  json j;
  j["code"] = ErrorCodeName(e.code());
  j["stage"] = e.stage();
  j["station"] = e.station() ? json(*e.station()) : json(nullptr);
  j["message"] = e.detail();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) WriteTextFile(dir + "/error.json", j.dump(1) + "\n");
}

PipelineConfig BuildConfig(const SmoothFlags& f, const json* scenario_config) {
  PipelineConfig cfg;
  if (!f.config.empty()) ApplyConfigJson(ReadTextFile(f.config), &cfg);
  if (scenario_config) ApplyConfigJson(scenario_config->dump(), &cfg);
  if (!f.limits.empty()) ApplyLimitsJson(ReadTextFile(f.limits), &cfg.limits);
  std::string overrides = "{";
  auto add = [&](const std::string& key, const std::string& value) {
    if (overrides.size() > 1) overrides += ",";
    overrides += "\"" + key + "\":" + value;
  };
  if (!f.variant.empty()) add("variant", json(f.variant).dump());
  if (!f.model.empty()) add("model", json(f.model).dump());
  if (!f.aerobatic.empty()) add("aerobatic", json(f.aerobatic).dump());
  overrides += "}";
  ApplyConfigJson(overrides, &cfg);
  if (f.t_s > 0.0) cfg.t_s = f.t_s;
  if (f.h > 0.0) cfg.h = f.h;
  if (f.v_ref > 0.0) cfg.v_ref = f.v_ref;
  if (f.iterations > 0) cfg.roll.lp_iterations = f.iterations;
  if (f.no_speed_limit) cfg.speed_limiting = false;
  return cfg;
}

SmoothingResult SmoothFile(const std::string& input, PipelineConfig cfg) {
  const WaypointFile file = LoadWaypoints(input);
  if (!file.v.empty()) cfg.v_ref_profile = file.v;
  if (!file.gamma.empty()) cfg.terrain_gamma = file.gamma;
  return RunPipeline(file.waypoints, cfg);
}

void WriteOutputs(const SmoothingResult& result, const std::string& dir,
                  bool plots) {
  ExportResult(result, dir);
  if (plots) EmitPlotData(result, dir + "/plots");
}

std::string Summary(const std::string& name, const SmoothingResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s: ok frame=%s stations=%d max|e_y|=%.3f max|phi|=%.3f "
                "slack=%.3g time=%.2fs",
                name.c_str(), PlaneName(r.frame), r.metrics.stations,
                r.metrics.max_abs_e_y, r.metrics.max_abs_phi, r.metrics.slack,
                r.metrics.solve_seconds);
  return buf;
}

int RunSmooth(const SmoothFlags& f) {
  if (f.batch.empty()) {
    if (f.input.empty()) {
      std::cerr << "error: smooth needs --input or --batch\n";
      return kExitConfig;
    }
    const PipelineConfig cfg = BuildConfig(f, nullptr);
    try {
      const SmoothingResult result = SmoothFile(f.input, cfg);
      WriteOutputs(result, f.out, f.plots);
      std::cout << Summary(f.input, result) << "\n";
      if (result.metrics.approximation_warning) {
        std::cout << "warning: ApproximationWarning rotated flight-path angle "
                  << result.metrics.max_abs_gamma_r << " rad\n";
      }
    } catch (const SmoothingError& e) {
      WriteErrorReport(f.out, e);
      throw;
    }
    return 0;
  }

  const json suite = json::parse(ReadTextFile(f.batch));
  const std::string base = fs::path(f.batch).parent_path().string();
  std::vector<json> entries = suite.at("scenarios").get<std::vector<json>>();
  const int count = static_cast<int>(entries.size());
  std::vector<std::string> lines(count);
  std::vector<int> codes(count, 0);
  std::atomic<int> next{0};
  const int jobs = std::max(
      1, std::min(count, f.jobs > 0 ? f.jobs
                                    : static_cast<int>(std::max(
                                          1u, std::thread::hardware_concurrency()))));
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      const json& entry = entries[i];
      const std::string name = entry.at("name").get<std::string>();
      const std::string dir = f.out + "/" + name;
      try {
        const json* overrides =
            entry.contains("config") ? &entry.at("config") : nullptr;
        const PipelineConfig cfg = BuildConfig(f, overrides);
        fs::path input = entry.at("input").get<std::string>();
        if (input.is_relative()) input = fs::path(base) / input;
        const SmoothingResult result = SmoothFile(input.string(), cfg);
        WriteOutputs(result, dir, f.plots);
        lines[i] = Summary(name, result);
      } catch (const SmoothingError& e) {
        WriteErrorReport(dir, e);
        lines[i] = name + ": " + e.what();
        codes[i] = ExitCodeFor(e.code());
      } catch (const std::exception& e) {
        lines[i] = name + ": internal error: " + e.what();
        codes[i] = kExitInternal;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  int code = 0;
  for (int i = 0; i < count; ++i) {
    std::cout << lines[i] << "\n";
    code = std::max(code, codes[i]);
  }
  return code;
}

std::vector<TrajectorySample> SamplesFromStates(
    const std::vector<AirplaneState>& states,
    const std::vector<AirplaneControl>& controls, double t_s) {
  std::vector<TrajectorySample> traj;
  double s = 0.0;
  for (size_t k = 0; k < states.size(); ++k) {
    if (k > 0) {
      s += std::hypot(states[k].x - states[k - 1].x,
                      states[k].y - states[k - 1].y);
    }
    const AirplaneControl& c = controls[std::min(k, controls.size() - 1)];
    traj.push_back({k * t_s, s, states[k].x, states[k].y, states[k].z,
                    states[k].psi, c.gamma, c.phi, c.v});
  }
  return traj;
}

int RunFallback(const std::string& input, const std::string& out,
                const std::string& limits_path, double t_s, double v_ref) {
  VehicleLimits limits;
  if (!limits_path.empty()) limits = LoadLimits(limits_path);
  TimeDomainConfig cfg;
  if (t_s > 0.0) cfg.t_s = t_s;
  if (v_ref > 0.0) cfg.v_ref = v_ref;
  try {
    const WaypointFile file = LoadWaypoints(input);
    const TimeDomainResult td = SolveTimeDomain(file.waypoints, limits, cfg);
    SmoothingResult result;
    result.limits = limits;
    result.planning_limits = limits;
    result.trajectory = SamplesFromStates(td.states, td.controls, cfg.t_s);
    result.metrics.stations = static_cast<int>(result.trajectory.size());
    result.metrics.lp_objective = td.tracking_cost;
    result.metrics.lp_iterations = td.lp_solves;
    result.metrics.simplex_iterations = td.simplex_iterations;
    for (const AirplaneControl& c : td.controls) {
      result.metrics.max_abs_phi =
          std::max(result.metrics.max_abs_phi, std::fabs(c.phi));
      result.metrics.max_abs_gamma =
          std::max(result.metrics.max_abs_gamma, std::fabs(c.gamma));
    }
    ExportResult(result, out);
    const FeasibilityReport report = CheckTrajectory(result.trajectory, limits);
    std::cout << input << ": fallback ok steps=" << td.controls.size()
              << " tracking_cost=" << td.tracking_cost
              << " feasible=" << (report.feasible ? "yes" : "no") << "\n";
    for (const std::string& v : report.violations) std::cout << "  " << v << "\n";
    return report.feasible ? 0 : 2;
  } catch (const SmoothingError& e) {
    WriteErrorReport(out, e);
    throw;
  }
}

int RunSimulate(const std::string& schedule_path, const std::string& out,
                const std::string& limits_path, const std::string& model_name,
                double t_s, const std::vector<double>& initial) {
  VehicleLimits limits;
  if (!limits_path.empty()) limits = LoadLimits(limits_path);
  VehicleModel model = VehicleModel::kAirplane;
  if (model_name == "tractor") {
    model = VehicleModel::kTractor;
  } else if (model_name != "airplane") {
    throw SmoothingError(ErrorCode::kConfig,
                         "unknown model '" + model_name + "'");
  }
  const std::vector<AirplaneControl> schedule =
      ParseScheduleCsv(ReadTextFile(schedule_path));
  AirplaneState x0;
  if (initial.size() == 4) x0 = {initial[0], initial[1], initial[2], initial[3]};
  const std::vector<AirplaneState> states =
      Simulate(x0, schedule, t_s, model, limits);
  const std::string csv =
      FormatTrajectoryCsv(SamplesFromStates(states, schedule, t_s));
  if (out.empty()) {
    std::cout << csv;
  } else {
    WriteTextFile(out, csv);
  }
  return 0;
}

int RunCheck(const std::string& path, const std::string& limits_path,
             const std::string& model_name) {
  VehicleLimits limits;
  if (!limits_path.empty()) limits = LoadLimits(limits_path);
  VehicleModel model =
      model_name == "tractor" ? VehicleModel::kTractor : VehicleModel::kAirplane;
  std::vector<TrajectorySample> traj;
  Plane frame = Plane::kXy;
  if (fs::path(path).extension() == ".json") {
    const SmoothingResult r = ParseResultJson(ReadTextFile(path));
    traj = r.trajectory;
    frame = r.frame;
    if (limits_path.empty()) limits = r.limits;
    if (model_name.empty()) model = r.model;
  } else {
    traj = ParseTrajectoryCsv(ReadTextFile(path));
  }
  if (frame == Plane::kXz) {
    for (TrajectorySample& s : traj) s = RotateSampleToVertical(s);
    limits = RotatedLimits(limits);
  }
  const FeasibilityReport report = CheckTrajectory(traj, limits, model);
  std::cout << path << ": " << (report.feasible ? "feasible" : "infeasible")
            << " (" << traj.size() << " samples, frame " << PlaneName(frame)
            << ")\n";
  for (const std::string& v : report.violations) std::cout << "  " << v << "\n";
  return report.feasible ? 0 : 2;
}

int Main(int argc, char** argv) {
  CLI::App app{"Smooths 3D waypoint references into feasible trajectories"};
  app.require_subcommand(1);

  SmoothFlags smooth_flags;
  CLI::App* smooth = app.add_subcommand("smooth", "Run the smoothing pipeline");
  smooth->add_option("--input,-i", smooth_flags.input, "Waypoint CSV or JSON");
  smooth->add_option("--out,-o", smooth_flags.out, "Output directory");
  smooth->add_option("--config", smooth_flags.config, "JSON configuration");
  smooth->add_option("--limits", smooth_flags.limits, "JSON vehicle limits");
  smooth->add_option("--variant", smooth_flags.variant, "lp1 or lp2")
      ->check(CLI::IsMember({"lp1", "lp2"}));
  smooth->add_option("--model", smooth_flags.model, "airplane or tractor")
      ->check(CLI::IsMember({"airplane", "tractor"}));
  smooth->add_option("--aerobatic", smooth_flags.aerobatic, "auto, xy or xz")
      ->check(CLI::IsMember({"auto", "xy", "xz"}));
  smooth->add_option("--ts", smooth_flags.t_s, "Simulation step bound [s]");
  smooth->add_option("--spacing", smooth_flags.h, "Station spacing [m]");
  smooth->add_option("--vref", smooth_flags.v_ref, "Reference speed [m/s]");
  smooth->add_option("--iterations", smooth_flags.iterations,
                     "Number of roll LP solves");
  smooth->add_option("--batch", smooth_flags.batch,
                     "Suite JSON listing scenarios to run in parallel");
  smooth->add_option("--jobs", smooth_flags.jobs, "Worker threads for --batch");
  smooth->add_flag("--no-speed-limit", smooth_flags.no_speed_limit,
                   "Keep the reference speed");
  smooth->add_flag("--plots", smooth_flags.plots, "Also write plot series");

  std::string fb_input, fb_out = "out", fb_limits;
  double fb_ts = 0.0, fb_vref = 0.0;
  CLI::App* fallback =
      app.add_subcommand("fallback", "Track the reference with the time-domain LP");
  fallback->add_option("--input,-i", fb_input, "Waypoint CSV or JSON")
      ->required();
  fallback->add_option("--out,-o", fb_out, "Output directory");
  fallback->add_option("--limits", fb_limits, "JSON vehicle limits");
  fallback->add_option("--ts", fb_ts, "Time step [s]");
  fallback->add_option("--vref", fb_vref, "Reference speed [m/s]");

  std::string sim_schedule, sim_out, sim_limits, sim_model = "airplane";
  double sim_ts = 0.1;
  std::vector<double> sim_initial;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Replay a control schedule");
  simulate->add_option("--schedule", sim_schedule, "CSV with gamma,phi,v")
      ->required();
  simulate->add_option("--out,-o", sim_out, "Trajectory CSV (stdout if empty)");
  simulate->add_option("--limits", sim_limits, "JSON vehicle limits");
  simulate->add_option("--model", sim_model, "airplane or tractor");
  simulate->add_option("--ts", sim_ts, "Step [s]");
  simulate->add_option("--initial", sim_initial, "x y z psi")->expected(4);

  std::string chk_path, chk_limits, chk_model;
  CLI::App* check =
      app.add_subcommand("check", "Validate a trajectory against limits");
  check->add_option("--trajectory,-t", chk_path,
                    "Trajectory CSV or result JSON")
      ->required();
  check->add_option("--limits", chk_limits, "JSON vehicle limits");
  check->add_option("--model", chk_model, "airplane or tractor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*smooth) return RunSmooth(smooth_flags);
    if (*fallback) return RunFallback(fb_input, fb_out, fb_limits, fb_ts, fb_vref);
    if (*simulate) {
      return RunSimulate(sim_schedule, sim_out, sim_limits, sim_model, sim_ts,
                         sim_initial);
    }
    if (*check) return RunCheck(chk_path, chk_limits, chk_model);
  } catch (const SmoothingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: Config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}

}  // namespace
}  // namespace dubins_smooth

int main(int argc, char** argv) { return dubins_smooth::Main(argc, argv); }
