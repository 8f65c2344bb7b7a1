#ifndef DUBINS_SMOOTH_GEOMETRY_H_
#define DUBINS_SMOOTH_GEOMETRY_H_

#include <cstddef>
#include <vector>

namespace dubins_smooth {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Station {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;
  double kappa = 0.0;
  Point2 normal;
};

struct ReferencePath {
  std::vector<Station> stations;
  double h = 0.0;

  // Number of steps between stations.
  int steps() const { return static_cast<int>(stations.size()) - 1; }
};

enum class Interpolation {
  kLinear,
  kCatmullRom,
};

struct Projection {
  double s = 0.0;
  double e_y = 0.0;
  double e_z = 0.0;
};

// Wraps an angle to (-pi, pi].
double WrapAngle(double angle);

// Samples the waypoint polyline at uniform planar arc length h. The
// remainder shorter than h at the end of the polyline is dropped.
ReferencePath ResampleArclength(const std::vector<Waypoint>& waypoints,
                                double h,
                                Interpolation interpolation =
                                    Interpolation::kLinear);

// Builds headings, normals and curvature for stations that are already
// spaced by h along the planar arc length.
ReferencePath PathFromStationPoints(const std::vector<Waypoint>& points,
                                    double h);

Projection ProjectPoint(const ReferencePath& path, const Waypoint& p);

double PathLength(const ReferencePath& path);

// Total planar length of a waypoint polyline.
double PolylineLength(const std::vector<Waypoint>& waypoints);

// Samples a polyline at uniform spatial (3D) arc length.
std::vector<Waypoint> SamplePolyline3d(const std::vector<Waypoint>& waypoints,
                                       double spacing);

std::vector<Waypoint> StationPoints(const ReferencePath& path);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_GEOMETRY_H_
