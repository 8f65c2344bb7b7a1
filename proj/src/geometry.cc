#include "dubins_smooth/geometry.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "dubins_smooth/error.h"

namespace dubins_smooth {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSamePointTolerance = 1e-12;

void CheckFinite(const std::vector<Waypoint>& waypoints) {
  for (size_t i = 0; i < waypoints.size(); ++i) {
    const Waypoint& w = waypoints[i];
    if (!std::isfinite(w.x) || !std::isfinite(w.y) || !std::isfinite(w.z)) {
      throw SmoothingError(ErrorCode::kNonFinite, "waypoint is not finite",
                           static_cast<int>(i));
    }
  }
}

double PlanarDistance(const Waypoint& a, const Waypoint& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

// Drops waypoints whose planar position repeats the previous one; the z of
// the later waypoint wins so that a vertical jump is kept at that place.
std::vector<Waypoint> CollapseDuplicates(const std::vector<Waypoint>& in) {
  std::vector<Waypoint> out;
  for (const Waypoint& w : in) {
    if (!out.empty() && PlanarDistance(out.back(), w) <= kSamePointTolerance) {
      out.back().z = w.z;
      continue;
    }
    out.push_back(w);
  }
  return out;
}

std::vector<Waypoint> SampleLinear(const std::vector<Waypoint>& poly,
                                   double h, int count) {
  std::vector<Waypoint> points;
  points.reserve(count + 1);
  size_t seg = 0;
  double seg_start = 0.0;
  double seg_len = PlanarDistance(poly[0], poly[1]);
  for (int k = 0; k <= count; ++k) {
    const double s = k * h;
    while (seg + 2 < poly.size() && s > seg_start + seg_len) {
      seg_start += seg_len;
      ++seg;
      seg_len = PlanarDistance(poly[seg], poly[seg + 1]);
    }
    const double t = std::clamp((s - seg_start) / seg_len, 0.0, 1.0);
    const Waypoint& a = poly[seg];
    const Waypoint& b = poly[seg + 1];
    points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                      a.z + t * (b.z - a.z)});
  }
  return points;
}

// Cubic Hermite segment with chord-length parameterized Catmull-Rom tangents.
class CatmullRomSpline {
 public:
  explicit CatmullRomSpline(const std::vector<Waypoint>& poly) : poly_(poly) {
    const size_t n = poly_.size();
    chords_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      chords_[i] = PlanarDistance(poly_[i], poly_[i + 1]);
    }
    tangents_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t lo = i == 0 ? 0 : i - 1;
      const size_t hi = i + 1 == n ? i : i + 1;
      double span = 0.0;
      for (size_t j = lo; j < hi; ++j) span += chords_[j];
      tangents_[i] = {(poly_[hi].x - poly_[lo].x) / span,
                      (poly_[hi].y - poly_[lo].y) / span,
                      (poly_[hi].z - poly_[lo].z) / span};
    }
    cumulative_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
      cumulative_[i + 1] = cumulative_[i] + SegmentLength(i, 1.0);
    }
  }

  double length() const { return cumulative_.back(); }

  Waypoint At(double s) const {
    const size_t seg = static_cast<size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end() - 1, s) -
        cumulative_.begin() - 1);
    const size_t i = std::min(seg, chords_.size() - 1);
    const double target = s - cumulative_[i];
    const double total = cumulative_[i + 1] - cumulative_[i];
    double lo = 0.0;
    double hi = 1.0;
    double u = std::clamp(target / total, 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
      const double f = SegmentLength(i, u) - target;
      if (std::fabs(f) < 1e-13) break;
      if (f > 0.0) {
        hi = u;
      } else {
        lo = u;
      }
      const std::array<double, 3> d = Derivative(i, u);
      const double speed = std::hypot(d[0], d[1]);
      double next = speed > 0.0 ? u - f / speed : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      u = next;
    }
    return Evaluate(i, u);
  }

 private:
  Waypoint Evaluate(size_t i, double u) const {
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    const double c = chords_[i];
    const Waypoint& a = poly_[i];
    const Waypoint& b = poly_[i + 1];
    const Waypoint& ma = tangents_[i];
    const Waypoint& mb = tangents_[i + 1];
    return {h00 * a.x + h10 * c * ma.x + h01 * b.x + h11 * c * mb.x,
            h00 * a.y + h10 * c * ma.y + h01 * b.y + h11 * c * mb.y,
            h00 * a.z + h10 * c * ma.z + h01 * b.z + h11 * c * mb.z};
  }

  std::array<double, 3> Derivative(size_t i, double u) const {
    const double u2 = u * u;
    const double d00 = 6 * u2 - 6 * u;
    const double d10 = 3 * u2 - 4 * u + 1;
    const double d01 = -6 * u2 + 6 * u;
    const double d11 = 3 * u2 - 2 * u;
    const double c = chords_[i];
    const Waypoint& a = poly_[i];
    const Waypoint& b = poly_[i + 1];
    const Waypoint& ma = tangents_[i];
    const Waypoint& mb = tangents_[i + 1];
    return {d00 * a.x + d10 * c * ma.x + d01 * b.x + d11 * c * mb.x,
            d00 * a.y + d10 * c * ma.y + d01 * b.y + d11 * c * mb.y,
            d00 * a.z + d10 * c * ma.z + d01 * b.z + d11 * c * mb.z};
  }

  // Planar arc length of segment i from 0 to u (composite Gauss-Legendre).
  double SegmentLength(size_t i, double u) const {
    static constexpr std::array<double, 5> kNodes = {
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
        0.9061798459386640};
    static constexpr std::array<double, 5> kWeights = {
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
        0.4786286704993665, 0.2369268850561891};
    constexpr int kPieces = 8;
    const double width = u / kPieces;
    double total = 0.0;
    for (int p = 0; p < kPieces; ++p) {
      const double mid = (p + 0.5) * width;
      for (size_t q = 0; q < kNodes.size(); ++q) {
        const std::array<double, 3> d =
            Derivative(i, mid + 0.5 * width * kNodes[q]);
        total += kWeights[q] * 0.5 * width * std::hypot(d[0], d[1]);
      }
    }
    return total;
  }

  std::vector<Waypoint> poly_;
  std::vector<double> chords_;
  std::vector<Waypoint> tangents_;
  std::vector<double> cumulative_;
};

}  // namespace

double WrapAngle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

ReferencePath PathFromStationPoints(const std::vector<Waypoint>& points,
                                    double h) {
  if (points.size() < 2) {
    throw SmoothingError(ErrorCode::kDegeneratePath,
                         "a path needs at least two stations");
  }
  CheckFinite(points);
  const size_t n = points.size();
  std::vector<double> chord(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    const double dx = points[k + 1].x - points[k].x;
    const double dy = points[k + 1].y - points[k].y;
    if (std::hypot(dx, dy) <= kSamePointTolerance) {
      chord[k] = k == 0 ? 0.0 : chord[k - 1];
    } else {
      chord[k] = std::atan2(dy, dx);
    }
  }
  ReferencePath path;
  path.h = h;
  path.stations.resize(n);
  for (size_t k = 0; k < n; ++k) {
    Station& st = path.stations[k];
    st.s = static_cast<double>(k) * h;
    st.x = points[k].x;
    st.y = points[k].y;
    st.z = points[k].z;
    if (k == 0) {
      st.psi = chord[0];
    } else if (k + 1 == n) {
      st.psi = chord[n - 2];
    } else {
      st.psi = WrapAngle(chord[k - 1] + 0.5 * WrapAngle(chord[k] - chord[k - 1]));
    }
    st.normal = {-std::sin(st.psi), std::cos(st.psi)};
  }
  for (size_t k = 0; k + 1 < n; ++k) {
    path.stations[k].kappa =
        WrapAngle(path.stations[k + 1].psi - path.stations[k].psi) / h;
  }
  path.stations[n - 1].kappa = n >= 3 ? path.stations[n - 2].kappa : 0.0;
  if (n == 2) path.stations[0].kappa = 0.0;
  return path;
}

ReferencePath ResampleArclength(const std::vector<Waypoint>& waypoints,
                                double h, Interpolation interpolation) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw SmoothingError(ErrorCode::kNonPositive,
                         "station spacing must be positive");
  }
  if (waypoints.size() < 2) {
    throw SmoothingError(ErrorCode::kDegeneratePath,
                         "at least two waypoints are required");
  }
  CheckFinite(waypoints);
  const std::vector<Waypoint> poly = CollapseDuplicates(waypoints);
  const double length = poly.size() >= 2 ? PolylineLength(poly) : 0.0;
  if (poly.size() < 2 || length < h * (1.0 - 1e-12)) {
    throw SmoothingError(ErrorCode::kDegeneratePath,
                         "planar path length is shorter than the spacing");
  }
  std::vector<Waypoint> points;
  if (interpolation == Interpolation::kLinear) {
    const int count = static_cast<int>(std::floor(length / h + 1e-9));
    points = SampleLinear(poly, h, count);
  } else {
    const CatmullRomSpline spline(poly);
    const int count = static_cast<int>(std::floor(spline.length() / h + 1e-9));
    if (count < 1) {
      throw SmoothingError(ErrorCode::kDegeneratePath,
                           "planar path length is shorter than the spacing");
    }
    points.reserve(count + 1);
    for (int k = 0; k <= count; ++k) points.push_back(spline.At(k * h));
  }
  return PathFromStationPoints(points, h);
}

Projection ProjectPoint(const ReferencePath& path, const Waypoint& p) {
  const std::vector<Station>& st = path.stations;
  for (const Station& s : st) {
    if (s.x == p.x && s.y == p.y) return {s.s, 0.0, p.z - s.z};
  }
  double best = std::numeric_limits<double>::infinity();
  Projection result;
  for (size_t k = 0; k + 1 < st.size(); ++k) {
    const double dx = st[k + 1].x - st[k].x;
    const double dy = st[k + 1].y - st[k].y;
    const double len2 = dx * dx + dy * dy;
    const double qx = p.x - st[k].x;
    const double qy = p.y - st[k].y;
    double t = len2 > 0.0 ? (qx * dx + qy * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double fx = st[k].x + t * dx;
    const double fy = st[k].y + t * dy;
    const double dist = std::hypot(p.x - fx, p.y - fy);
    if (dist < best) {
      best = dist;
      double tx = dx;
      double ty = dy;
      if (len2 <= 0.0) {
        tx = std::cos(st[k].psi);
        ty = std::sin(st[k].psi);
      }
      const double cross = tx * (p.y - fy) - ty * (p.x - fx);
      const double sign = cross >= 0.0 ? 1.0 : -1.0;
      result.s = t == 0.0   ? st[k].s
                 : t == 1.0 ? st[k + 1].s
                            : st[k].s + t * (st[k + 1].s - st[k].s);
      result.e_y = sign * dist;
      const double z = t == 0.0   ? st[k].z
                       : t == 1.0 ? st[k + 1].z
                                  : st[k].z + t * (st[k + 1].z - st[k].z);
      result.e_z = p.z - z;
    }
  }
  return result;
}

double PathLength(const ReferencePath& path) {
  return path.stations.empty() ? 0.0 : path.stations.back().s;
}

double PolylineLength(const std::vector<Waypoint>& waypoints) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    total += PlanarDistance(waypoints[i], waypoints[i + 1]);
  }
  return total;
}

std::vector<Waypoint> SamplePolyline3d(const std::vector<Waypoint>& waypoints,
                                       double spacing) {
  if (!(spacing > 0.0)) {
    throw SmoothingError(ErrorCode::kNonPositive, "spacing must be positive");
  }
  CheckFinite(waypoints);
  std::vector<double> cumulative(waypoints.size(), 0.0);
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Waypoint& a = waypoints[i];
    const Waypoint& b = waypoints[i + 1];
    cumulative[i + 1] =
        cumulative[i] + std::sqrt((b.x - a.x) * (b.x - a.x) +
                                  (b.y - a.y) * (b.y - a.y) +
                                  (b.z - a.z) * (b.z - a.z));
  }
  const double length = cumulative.empty() ? 0.0 : cumulative.back();
  if (waypoints.size() < 2 || length < spacing) {
    throw SmoothingError(ErrorCode::kDegeneratePath,
                         "path length is shorter than the spacing");
  }
  const int count = static_cast<int>(std::floor(length / spacing + 1e-9));
  std::vector<Waypoint> out;
  out.reserve(count + 1);
  size_t seg = 0;
  for (int k = 0; k <= count; ++k) {
    const double s = k * spacing;
    while (seg + 2 < waypoints.size() && s > cumulative[seg + 1]) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? std::clamp((s - cumulative[seg]) / len, 0.0, 1.0)
                               : 0.0;
    const Waypoint& a = waypoints[seg];
    const Waypoint& b = waypoints[seg + 1];
    out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                   a.z + t * (b.z - a.z)});
  }
  return out;
}

std::vector<Waypoint> StationPoints(const ReferencePath& path) {
  std::vector<Waypoint> out;
  out.reserve(path.stations.size());
  for (const Station& s : path.stations) out.push_back({s.x, s.y, s.z});
  return out;
}

}  // namespace dubins_smooth
