#ifndef DUBINS_SMOOTH_IO_H_
#define DUBINS_SMOOTH_IO_H_

#include <string>
#include <vector>

#include "dubins_smooth/dubins_model.h"
#include "dubins_smooth/geometry.h"
#include "dubins_smooth/pipeline.h"

namespace dubins_smooth {

struct WaypointFile {
  std::vector<Waypoint> waypoints;
  // Optional per-waypoint columns; empty when absent.
  std::vector<double> v;
  std::vector<double> gamma;
};

// CSV with a header naming x, y, z and optionally v and gamma, or a JSON
// array of [x, y, z] triples.
WaypointFile LoadWaypoints(const std::string& path);
WaypointFile ParseWaypointsCsv(const std::string& text);
WaypointFile ParseWaypointsJson(const std::string& text);

// Overrides the fields present in a JSON object of limits.
void ApplyLimitsJson(const std::string& text, VehicleLimits* limits);
VehicleLimits LoadLimits(const std::string& path);

// Overrides the fields present in a JSON configuration object. Recognized
// keys: model, variant, ts, spacing, vref, iterations, aerobatic,
// slack_weight, speed_limiting, limits.
void ApplyConfigJson(const std::string& text, PipelineConfig* cfg);

std::string FormatTrajectoryCsv(const std::vector<TrajectorySample>& traj);
std::vector<TrajectorySample> ParseTrajectoryCsv(const std::string& text);

std::string FormatResultJson(const SmoothingResult& result);
SmoothingResult ParseResultJson(const std::string& text);

// Control schedule with columns gamma, phi, v.
std::vector<AirplaneControl> ParseScheduleCsv(const std::string& text);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

// Writes trajectory.csv and result.json into dir.
void ExportResult(const SmoothingResult& result, const std::string& dir);

// Writes xy.csv, xz.csv, s_phi.csv, s_v.csv and s_gamma.csv into dir.
void EmitPlotData(const SmoothingResult& result, const std::string& dir);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_IO_H_
