#include "roadside/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace roadside::geometry {

namespace {

constexpr double kHalfPi = kPi / 2.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Inclusive comparison that absorbs the last-bit rounding of closed-form terms.
bool at_least(double a, double b) {
  return a >= b - 1e-12 * std::max(1.0, std::abs(b));
}

bool at_most(double a, double b) { return at_least(b, a); }

std::string join(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].field << ": " << violations[i].message;
  }
  return out.str();
}

// min(beta, gamma) and max(beta, gamma)
double inner_angle(const SensorFieldConfig& cfg) {
  return cfg.opening_omega / 2.0 - std::abs(cfg.rotation_alpha);
}
double outer_angle(const SensorFieldConfig& cfg) {
  return cfg.opening_omega / 2.0 + std::abs(cfg.rotation_alpha);
}

// Distance from the farther sensor to the edge/edge crossing,
// y_min / cos(omega/2 + |alpha|), rewritten as spacing cos(theta_in) / sin(omega)
// so that it stays finite when the outer edge lies on the sensor line.
double edge_crossing_reach(const SensorFieldConfig& cfg, double spacing) {
  const double omega = cfg.opening_omega;
  if (omega <= 0.0) return kInf;
  if (omega >= kPi - kAngleTolerance) return spacing / 2.0;
  return spacing * std::cos(inner_angle(cfg)) / std::sin(omega);
}

// Range needed by the edge owner to reach height y on its inner edge.
double inner_edge_reach(const SensorFieldConfig& cfg, double y) {
  const double c = std::cos(inner_angle(cfg));
  if (c <= 0.0) return kInf;
  return y / c;
}

// Polar angle (from +y) of the point at height y on a sensor's arc.
double arc_angle(double y, double r) {
  return std::acos(std::clamp(y / r, -1.0, 1.0));
}

// Guards shared by the two line/arc constellations.
bool line_arc_reachable(const SensorFieldConfig& cfg, double spacing, double y) {
  const double r = cfg.range_r;
  const double theta = inner_angle(cfg);
  return at_least(outer_angle(cfg), arc_angle(y, r)) &&
         at_least(r, std::max(inner_edge_reach(cfg, y), spacing * std::cos(theta)));
}

bool arc_arc_applies(const SensorFieldConfig& cfg, double spacing) {
  const double r = cfg.range_r;
  if (r <= 0.0 || !at_least(r, spacing / 2.0)) return false;
  // The arc/arc crossing (spacing/2, y_max) has bearing asin(spacing / 2r)
  // from the boresight axis of either sensor.
  const double ratio = std::min(1.0, spacing / (2.0 * r));
  return at_least(inner_angle(cfg), std::asin(ratio));
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<Violation> violations)
    : std::invalid_argument("invalid sensor field config: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> check(const SensorFieldConfig& cfg) {
  std::vector<Violation> out;
  const double omega = cfg.opening_omega;
  if (!(omega >= 0.0 && omega <= kPi)) {
    out.push_back({"opening_omega", "must satisfy 0 <= omega <= pi"});
  } else if (!(std::abs(cfg.rotation_alpha) <= max_rotation(omega) + kAngleTolerance)) {
    out.push_back({"rotation_alpha", "must satisfy |alpha| <= (pi - omega) / 2"});
  }
  if (!(cfg.range_r >= 0.0) || !std::isfinite(cfg.range_r)) {
    out.push_back({"range_r", "must be a finite value >= 0"});
  }
  if (!(cfg.sensor_spacing_dpyl > 0.0) || !std::isfinite(cfg.sensor_spacing_dpyl)) {
    out.push_back({"sensor_spacing_dpyl", "must be > 0"});
  }
  if (!(cfg.road_width_droad > 0.0) || !std::isfinite(cfg.road_width_droad)) {
    out.push_back({"road_width_droad", "must be > 0"});
  }
  if (!(cfg.sensor_to_road_dsr >= 0.0) || !std::isfinite(cfg.sensor_to_road_dsr)) {
    out.push_back({"sensor_to_road_dsr", "must be >= 0"});
  }
  return out;
}

void validate(const SensorFieldConfig& cfg) {
  auto violations = check(cfg);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
}

double max_rotation(double omega) { return (kPi - omega) / 2.0; }

EdgeAngles edge_angles(const SensorFieldConfig& cfg) {
  validate(cfg);
  return {cfg.opening_omega / 2.0 + cfg.rotation_alpha,
          cfg.opening_omega / 2.0 - cfg.rotation_alpha};
}

double lower_line_line(const SensorFieldConfig& cfg, double spacing) {
  const double beta = cfg.opening_omega / 2.0 + cfg.rotation_alpha;
  const double gamma = cfg.opening_omega / 2.0 - cfg.rotation_alpha;
  if (beta >= kHalfPi - kAngleTolerance || gamma >= kHalfPi - kAngleTolerance) return 0.0;
  const double denom = std::tan(beta) + std::tan(gamma);
  if (!(denom > 0.0)) return kInf;
  return spacing / denom;
}

std::optional<LineArcRoots> lower_upper_line_arc(const SensorFieldConfig& cfg, double spacing) {
  const double theta = inner_angle(cfg);
  const double c = std::cos(theta);
  const double r = cfg.range_r;
  const double disc = r * r - spacing * spacing * c * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double s = spacing * std::sin(theta);
  return LineArcRoots{c * (s - root), c * (s + root)};
}

std::optional<double> upper_arc_arc(const SensorFieldConfig& cfg, double spacing) {
  if (!arc_arc_applies(cfg, spacing)) return std::nullopt;
  const double r = cfg.range_r;
  const double half = spacing / 2.0;
  return std::sqrt(std::max(0.0, r * r - half * half));
}

IntersectionResult lower_crossing(const SensorFieldConfig& cfg, double spacing) {
  const double r = cfg.range_r;
  if (!(r > 0.0)) return {};
  if (at_least(r, edge_crossing_reach(cfg, spacing))) {
    return {IntersectionKind::LineLine, lower_line_line(cfg, spacing), std::nullopt};
  }
  const auto roots = lower_upper_line_arc(cfg, spacing);
  if (roots && line_arc_reachable(cfg, spacing, roots->y_minus)) {
    return {IntersectionKind::LineArc, roots->y_minus, std::nullopt};
  }
  return {};
}

IntersectionResult upper_crossing(const SensorFieldConfig& cfg, double spacing) {
  const double r = cfg.range_r;
  if (!(r > 0.0)) return {};
  if (const auto y_max = upper_arc_arc(cfg, spacing)) {
    return {IntersectionKind::ArcArc, std::nullopt, *y_max};
  }
  // The arc/arc guard failed (or is undefined because r < spacing / 2): the
  // upper crossing can only be an edge/arc one.
  const auto roots = lower_upper_line_arc(cfg, spacing);
  if (roots && line_arc_reachable(cfg, spacing, roots->y_plus)) {
    return {IntersectionKind::LineArc, std::nullopt, roots->y_plus};
  }
  return {};
}

bool lower_requirement(const SensorFieldConfig& cfg, double spacing) {
  const auto crossing = lower_crossing(cfg, spacing);
  return crossing.y_lower && at_most(*crossing.y_lower, cfg.sensor_to_road_dsr);
}

bool upper_requirement(const SensorFieldConfig& cfg, double spacing) {
  const auto crossing = upper_crossing(cfg, spacing);
  return crossing.y_upper &&
         at_least(*crossing.y_upper, cfg.sensor_to_road_dsr + cfg.road_width_droad);
}

bool covered_at_spacing(const SensorFieldConfig& cfg, double spacing) {
  return lower_requirement(cfg, spacing) && upper_requirement(cfg, spacing);
}

bool covered_with_degree(const SensorFieldConfig& cfg, int n) {
  if (n < 1) throw std::invalid_argument("coverage degree must be >= 1");
  return covered_at_spacing(cfg, n * cfg.sensor_spacing_dpyl);
}

double min_range(const SensorFieldConfig& cfg) {
  return std::hypot(cfg.sensor_spacing_dpyl / 2.0, cfg.sensor_to_road_dsr + cfg.road_width_droad);
}

}  // namespace roadside::geometry
