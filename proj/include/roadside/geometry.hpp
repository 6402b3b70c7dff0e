/**
 * @file geometry.hpp
 * @brief Closed-form crossing points of neighboring sensor sectors and the
 *        full / n-fold road coverage predicates of a periodic roadside array.
 *
 * Coordinate convention: sensor k sits at (k * d_pyl, 0); the road occupies
 * the band y in [d_sr, d_sr + d_road]. A sensor's field of view is a circle
 * sector of radius r whose edges make the angles -gamma and +beta with the
 * +y axis (positive towards +x), i.e. the right edge is x = y tan(beta) and
 * the left edge is x = -y tan(gamma).
 */
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadside::geometry {

inline constexpr double kPi = 3.14159265358979323846;

/// Tolerance for treating an edge angle as pi/2 (diverging tangent).
inline constexpr double kAngleTolerance = 1e-12;

/// The six topology parameters of the sensor array. Lengths in meters, angles in radians.
struct SensorFieldConfig {
  double range_r{0.0};
  double opening_omega{0.0};
  double rotation_alpha{0.0};
  double sensor_to_road_dsr{0.0};
  double sensor_spacing_dpyl{0.0};
  double road_width_droad{0.0};
};

struct EdgeAngles {
  double beta{0.0};
  double gamma{0.0};
};

enum class IntersectionKind { LineLine, LineArc, ArcArc, None };

/**
 * @brief Vertical position(s) of a crossing point between two neighboring sectors.
 *
 * LineLine fills y_lower (y_min), ArcArc fills y_upper (y_max), LineArc fills
 * whichever root the constellation refers to (or both for the raw roots).
 */
struct IntersectionResult {
  IntersectionKind kind{IntersectionKind::None};
  std::optional<double> y_lower;
  std::optional<double> y_upper;
};

struct LineArcRoots {
  double y_minus{0.0};
  double y_plus{0.0};
};

/// One violated invariant, addressed by field name.
struct Violation {
  std::string field;
  std::string message;
};

class InvalidConfig : public std::invalid_argument {
 public:
  explicit InvalidConfig(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Every violated invariant of @p cfg; empty when valid. A range of 0 is
/// accepted as the degenerate "blind sensor".
std::vector<Violation> check(const SensorFieldConfig& cfg);

/// Throws InvalidConfig listing every violation.
void validate(const SensorFieldConfig& cfg);

/// Largest admissible rotation for a given opening angle, (pi - omega) / 2.
double max_rotation(double omega);

EdgeAngles edge_angles(const SensorFieldConfig& cfg);

/// Lower crossing of the two lateral edges, spacing / (tan beta + tan gamma).
/// Returns 0 when either edge is parallel to the sensor line.
double lower_line_line(const SensorFieldConfig& cfg, double spacing);

/// Both roots of the edge/arc crossing, or nullopt when r < spacing cos(theta),
/// theta = omega/2 - |alpha|.
std::optional<LineArcRoots> lower_upper_line_arc(const SensorFieldConfig& cfg, double spacing);

/// Crossing of the two arcs, sqrt(r^2 - (spacing/2)^2), when the opening angle
/// is wide enough for the arcs to meet inside both sectors.
std::optional<double> upper_arc_arc(const SensorFieldConfig& cfg, double spacing);

/// The constellation that forms the lower crossing point, with its guards applied.
IntersectionResult lower_crossing(const SensorFieldConfig& cfg, double spacing);

/// The constellation that forms the upper crossing point, with its guards applied.
IntersectionResult upper_crossing(const SensorFieldConfig& cfg, double spacing);

bool lower_requirement(const SensorFieldConfig& cfg, double spacing);
bool upper_requirement(const SensorFieldConfig& cfg, double spacing);

/// Lower and upper requirement at an arbitrary neighbor spacing.
bool covered_at_spacing(const SensorFieldConfig& cfg, double spacing);

/// Every road point lies in the field of view of at least @p n sensors.
bool covered_with_degree(const SensorFieldConfig& cfg, int n);

/// Smallest range that can possibly give full coverage.
double min_range(const SensorFieldConfig& cfg);

}  // namespace roadside::geometry
