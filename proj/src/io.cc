#include "dubins_smooth/io.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dubins_smooth/error.h"

namespace dubins_smooth {
namespace {

using nlohmann::json;

constexpr char kTrajectoryHeader[] = "t,s,x,y,z,psi,gamma,phi,v";

std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& cell, int line) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw SmoothingError(ErrorCode::kIo, "line " + std::to_string(line) +
                                             ": not a number '" + cell + "'");
  }
  return value;
}

// Rows of a CSV with a header; returns column name -> values.
std::map<std::string, std::vector<double>> ParseTable(
    const std::string& text, const std::vector<std::string>& required) {
  std::stringstream ss(text);
  std::string line;
  std::vector<std::string> header;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitCsv(Trim(line));
      break;
    }
  }
  if (header.empty()) {
    throw SmoothingError(ErrorCode::kIo, "CSV input is empty");
  }
  std::map<std::string, std::vector<double>> table;
  for (const std::string& name : header) {
    if (name.empty() || table.count(name)) {
      throw SmoothingError(ErrorCode::kIo, "CSV header has empty or repeated "
                                           "column names");
    }
    table[name];
  }
  for (const std::string& name : required) {
    if (!table.count(name)) {
      throw SmoothingError(ErrorCode::kIo,
                           "CSV header lacks column '" + name + "'");
    }
  }
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string row = Trim(line);
    if (row.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(row);
    if (cells.size() != header.size()) {
      throw SmoothingError(ErrorCode::kIo, "line " + std::to_string(line_no) +
                                               ": wrong number of columns");
    }
    for (size_t i = 0; i < cells.size(); ++i) {
      table[header[i]].push_back(ParseNumber(cells[i], line_no));
    }
  }
  return table;
}

double Round9(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

std::string Fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", Round9(v));
  return buf;
}

json LoadJson(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SmoothingError(ErrorCode::kIo,
                         std::string("invalid JSON in ") + what + ": " +
                             e.what());
  }
}

template <typename T>
void Read(const json& j, const char* key, T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SmoothingError(ErrorCode::kConfig,
                         std::string("invalid value for '") + key + "'");
  }
}

void ApplyLimits(const json& j, VehicleLimits* limits) {
  if (!j.is_object()) {
    throw SmoothingError(ErrorCode::kConfig, "limits must be a JSON object");
  }
  static const char* kKeys[] = {
      "gamma_min", "gamma_max", "dgamma_min", "dgamma_max", "phi_min",
      "phi_max",   "dphi_min",  "dphi_max",   "v_min",      "v_max",
      "dv_min",    "dv_max",    "g",          "wheelbase"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known = known || it.key() == k;
    if (!known) {
      throw SmoothingError(ErrorCode::kConfig,
                           "unknown limits key '" + it.key() + "'");
    }
  }
  Read(j, "gamma_min", &limits->gamma_min);
  Read(j, "gamma_max", &limits->gamma_max);
  Read(j, "dgamma_min", &limits->dgamma_min);
  Read(j, "dgamma_max", &limits->dgamma_max);
  Read(j, "phi_min", &limits->phi_min);
  Read(j, "phi_max", &limits->phi_max);
  Read(j, "dphi_min", &limits->dphi_min);
  Read(j, "dphi_max", &limits->dphi_max);
  Read(j, "v_min", &limits->v_min);
  Read(j, "v_max", &limits->v_max);
  Read(j, "dv_min", &limits->dv_min);
  Read(j, "dv_max", &limits->dv_max);
  Read(j, "g", &limits->g);
  Read(j, "wheelbase", &limits->wheelbase);
}

json LimitsJson(const VehicleLimits& l) {
  json j;
  j["gamma_min"] = l.gamma_min;
  j["gamma_max"] = l.gamma_max;
  j["dgamma_min"] = l.dgamma_min;
  j["dgamma_max"] = l.dgamma_max;
  j["phi_min"] = l.phi_min;
  j["phi_max"] = l.phi_max;
  j["dphi_min"] = l.dphi_min;
  j["dphi_max"] = l.dphi_max;
  j["v_min"] = l.v_min;
  j["v_max"] = l.v_max;
  j["dv_min"] = l.dv_min;
  j["dv_max"] = l.dv_max;
  j["g"] = l.g;
  j["wheelbase"] = l.wheelbase;
  return j;
}

json MetricsJson(const PipelineMetrics& m) {
  json j;
  j["max_abs_e_y"] = Round9(m.max_abs_e_y);
  j["max_tracking_error"] = Round9(m.max_tracking_error);
  j["max_prediction_gap"] = Round9(m.max_prediction_gap);
  j["max_abs_phi"] = Round9(m.max_abs_phi);
  j["max_abs_gamma"] = Round9(m.max_abs_gamma);
  j["min_v_margin"] = Round9(m.min_v_margin);
  j["slack"] = Round9(m.slack);
  j["lp_objective"] = Round9(m.lp_objective);
  j["gamma_clamp_count"] = m.gamma_clamp_count;
  j["speed_limited_count"] = m.speed_limited_count;
  j["rate_clamp_count"] = m.rate_clamp_count;
  j["lp_iterations"] = m.lp_iterations;
  j["simplex_iterations"] = m.simplex_iterations;
  j["validity_rows"] = m.validity_rows;
  j["stations"] = m.stations;
  j["approximation_warning"] = m.approximation_warning;
  j["max_abs_gamma_r"] = Round9(m.max_abs_gamma_r);
  return j;
}

}  // namespace

WaypointFile ParseWaypointsCsv(const std::string& text) {
  auto table = ParseTable(text, {"x", "y", "z"});
  WaypointFile out;
  const size_t n = table["x"].size();
  for (size_t i = 0; i < n; ++i) {
    out.waypoints.push_back({table["x"][i], table["y"][i], table["z"][i]});
  }
  if (table.count("v")) out.v = table["v"];
  if (table.count("gamma")) out.gamma = table["gamma"];
  return out;
}

WaypointFile ParseWaypointsJson(const std::string& text) {
  const json j = LoadJson(text, "waypoints");
  if (!j.is_array()) {
    throw SmoothingError(ErrorCode::kIo, "waypoint JSON must be an array");
  }
  WaypointFile out;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() ||
        !p[1].is_number() || !p[2].is_number()) {
      throw SmoothingError(ErrorCode::kIo,
                           "each waypoint must be a [x, y, z] triple");
    }
    out.waypoints.push_back(
        {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  return out;
}

WaypointFile LoadWaypoints(const std::string& path) {
  const std::string text = ReadTextFile(path);
  const std::string ext = std::filesystem::path(path).extension().string();
  return ext == ".json" ? ParseWaypointsJson(text) : ParseWaypointsCsv(text);
}

void ApplyLimitsJson(const std::string& text, VehicleLimits* limits) {
  ApplyLimits(LoadJson(text, "limits"), limits);
}

VehicleLimits LoadLimits(const std::string& path) {
  VehicleLimits limits;
  ApplyLimitsJson(ReadTextFile(path), &limits);
  ValidateLimits(limits);
  return limits;
}

void ApplyConfigJson(const std::string& text, PipelineConfig* cfg) {
  const json j = LoadJson(text, "configuration");
  if (!j.is_object()) {
    throw SmoothingError(ErrorCode::kConfig,
                         "configuration must be a JSON object");
  }
  static const char* kKeys[] = {"model",      "variant",    "ts",
                                "spacing",    "vref",       "iterations",
                                "aerobatic",  "slack_weight",
                                "speed_limiting", "limits"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known = known || it.key() == k;
    if (!known) {
      throw SmoothingError(ErrorCode::kConfig,
                           "unknown configuration key '" + it.key() + "'");
    }
  }
  if (j.contains("model")) {
    std::string model;
    Read(j, "model", &model);
    if (model == "airplane") {
      cfg->model = VehicleModel::kAirplane;
    } else if (model == "tractor") {
      cfg->model = VehicleModel::kTractor;
    } else {
      throw SmoothingError(ErrorCode::kConfig, "unknown model '" + model + "'");
    }
  }
  if (j.contains("variant")) {
    std::string variant;
    Read(j, "variant", &variant);
    if (variant == "lp1") {
      cfg->roll.variant = RollVariant::kLp1;
    } else if (variant == "lp2") {
      cfg->roll.variant = RollVariant::kLp2;
    } else {
      throw SmoothingError(ErrorCode::kConfig,
                           "unknown variant '" + variant + "'");
    }
  }
  if (j.contains("aerobatic")) {
    std::string mode;
    Read(j, "aerobatic", &mode);
    if (mode == "auto") {
      cfg->aerobatic = AerobaticMode::kAuto;
    } else if (mode == "xy") {
      cfg->aerobatic = AerobaticMode::kForceXy;
    } else if (mode == "xz") {
      cfg->aerobatic = AerobaticMode::kForceXz;
    } else {
      throw SmoothingError(ErrorCode::kConfig,
                           "unknown aerobatic mode '" + mode + "'");
    }
  }
  Read(j, "ts", &cfg->t_s);
  Read(j, "spacing", &cfg->h);
  Read(j, "vref", &cfg->v_ref);
  Read(j, "iterations", &cfg->roll.lp_iterations);
  Read(j, "slack_weight", &cfg->roll.slack_weight);
  Read(j, "speed_limiting", &cfg->speed_limiting);
  if (j.contains("limits")) ApplyLimits(j["limits"], &cfg->limits);
}

std::string FormatTrajectoryCsv(const std::vector<TrajectorySample>& traj) {
  if (traj.empty()) {
    throw SmoothingError(ErrorCode::kIo, "refusing to export an empty "
                                         "trajectory");
  }
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const TrajectorySample& s : traj) {
    out += Fixed9(s.t) + "," + Fixed9(s.s) + "," + Fixed9(s.x) + "," +
           Fixed9(s.y) + "," + Fixed9(s.z) + "," + Fixed9(s.psi) + "," +
           Fixed9(s.gamma) + "," + Fixed9(s.phi) + "," + Fixed9(s.v) + "\n";
  }
  return out;
}

std::vector<TrajectorySample> ParseTrajectoryCsv(const std::string& text) {
  auto table = ParseTable(
      text, {"t", "s", "x", "y", "z", "psi", "gamma", "phi", "v"});
  std::vector<TrajectorySample> out(table["t"].size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = {table["t"][i],   table["s"][i],     table["x"][i],
              table["y"][i],   table["z"][i],     table["psi"][i],
              table["gamma"][i], table["phi"][i], table["v"][i]};
  }
  return out;
}

std::string FormatResultJson(const SmoothingResult& result) {
  if (result.trajectory.empty()) {
    throw SmoothingError(ErrorCode::kIo, "refusing to export an empty "
                                         "trajectory");
  }
  json j;
  j["frame"] = PlaneName(result.frame);
  j["model"] =
      result.model == VehicleModel::kTractor ? "tractor" : "airplane";
  j["metrics"] = MetricsJson(result.metrics);
  j["limits"] = LimitsJson(result.limits);
  json columns = json::array();
  for (const char* c : {"t", "s", "x", "y", "z", "psi", "gamma", "phi", "v"}) {
    columns.push_back(c);
  }
  j["columns"] = columns;
  json rows = json::array();
  for (const TrajectorySample& s : result.trajectory) {
    rows.push_back({Round9(s.t), Round9(s.s), Round9(s.x), Round9(s.y),
                    Round9(s.z), Round9(s.psi), Round9(s.gamma),
                    Round9(s.phi), Round9(s.v)});
  }
  j["trajectory"] = rows;
  return j.dump(1) + "\n";
}

SmoothingResult ParseResultJson(const std::string& text) {
  const json j = LoadJson(text, "result");
  SmoothingResult out;
  try {
    out.frame = j.at("frame").get<std::string>() == "xz" ? Plane::kXz
                                                         : Plane::kXy;
    out.model = j.at("model").get<std::string>() == "tractor"
                    ? VehicleModel::kTractor
                    : VehicleModel::kAirplane;
    if (j.contains("limits")) ApplyLimits(j.at("limits"), &out.limits);
    const json& m = j.at("metrics");
    PipelineMetrics& pm = out.metrics;
    pm.max_abs_e_y = m.at("max_abs_e_y").get<double>();
    pm.max_tracking_error = m.at("max_tracking_error").get<double>();
    pm.max_prediction_gap = m.at("max_prediction_gap").get<double>();
    pm.max_abs_phi = m.at("max_abs_phi").get<double>();
    pm.max_abs_gamma = m.at("max_abs_gamma").get<double>();
    pm.min_v_margin = m.at("min_v_margin").get<double>();
    pm.slack = m.at("slack").get<double>();
    pm.lp_objective = m.at("lp_objective").get<double>();
    pm.gamma_clamp_count = m.at("gamma_clamp_count").get<int>();
    pm.speed_limited_count = m.at("speed_limited_count").get<int>();
    pm.rate_clamp_count = m.at("rate_clamp_count").get<int>();
    pm.lp_iterations = m.at("lp_iterations").get<int>();
    pm.simplex_iterations = m.at("simplex_iterations").get<int>();
    pm.validity_rows = m.at("validity_rows").get<int>();
    pm.stations = m.at("stations").get<int>();
    pm.approximation_warning = m.at("approximation_warning").get<bool>();
    pm.max_abs_gamma_r = m.at("max_abs_gamma_r").get<double>();
    for (const json& r : j.at("trajectory")) {
      if (r.size() != 9) {
        throw SmoothingError(ErrorCode::kIo, "trajectory row needs 9 values");
      }
      out.trajectory.push_back({r[0].get<double>(), r[1].get<double>(),
                                r[2].get<double>(), r[3].get<double>(),
                                r[4].get<double>(), r[5].get<double>(),
                                r[6].get<double>(), r[7].get<double>(),
                                r[8].get<double>()});
    }
  } catch (const json::exception& e) {
    throw SmoothingError(ErrorCode::kIo,
                         std::string("malformed result JSON: ") + e.what());
  }
  out.planning_trajectory = out.trajectory;
  out.planning_limits = out.limits;
  return out;
}

std::vector<AirplaneControl> ParseScheduleCsv(const std::string& text) {
  auto table = ParseTable(text, {"gamma", "phi", "v"});
  std::vector<AirplaneControl> out(table["v"].size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = {table["gamma"][i], table["phi"][i], table["v"][i]};
  }
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SmoothingError(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw SmoothingError(ErrorCode::kIo, "cannot write '" + path + "'");
  }
  out << text;
  if (!out) throw SmoothingError(ErrorCode::kIo, "write failed: " + path);
}

void ExportResult(const SmoothingResult& result, const std::string& dir) {
  const std::string csv = FormatTrajectoryCsv(result.trajectory);
  const std::string js = FormatResultJson(result);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SmoothingError(ErrorCode::kIo, "cannot create '" + dir + "'");
  WriteTextFile(dir + "/trajectory.csv", csv);
  WriteTextFile(dir + "/result.json", js);
}

void EmitPlotData(const SmoothingResult& result, const std::string& dir) {
  if (result.trajectory.empty()) {
    throw SmoothingError(ErrorCode::kIo, "no trajectory to plot");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SmoothingError(ErrorCode::kIo, "cannot create '" + dir + "'");
  std::string xy = "x,y\n", xz = "x,z\n", s_phi = "s,phi\n", s_v = "s,v\n",
              s_gamma = "s,gamma\n";
  for (const TrajectorySample& s : result.trajectory) {
    xy += Fixed9(s.x) + "," + Fixed9(s.y) + "\n";
    xz += Fixed9(s.x) + "," + Fixed9(s.z) + "\n";
    s_phi += Fixed9(s.s) + "," + Fixed9(s.phi) + "\n";
    s_v += Fixed9(s.s) + "," + Fixed9(s.v) + "\n";
    s_gamma += Fixed9(s.s) + "," + Fixed9(s.gamma) + "\n";
  }
  WriteTextFile(dir + "/xy.csv", xy);
  WriteTextFile(dir + "/xz.csv", xz);
  WriteTextFile(dir + "/s_phi.csv", s_phi);
  WriteTextFile(dir + "/s_v.csv", s_v);
  WriteTextFile(dir + "/s_gamma.csv", s_gamma);
}

}  // namespace dubins_smooth
