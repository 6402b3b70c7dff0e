/**
 * @file coverage.hpp
 * @brief Brute-force coverage-degree oracle on a grid over one period of the array.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "roadside/geometry.hpp"

namespace roadside::coverage {

using geometry::SensorFieldConfig;

inline constexpr double kDefaultCellSize = 0.25;

struct Point {
  double x{0.0};
  double y{0.0};
};

/// Coverage degree per cell center over x in [0, d_pyl), y in [d_sr, d_sr + d_road].
struct CoverageGrid {
  double cell_size{kDefaultCellSize};
  Point origin;  // lower-left corner of the first cell
  std::size_t columns{0};
  std::size_t rows{0};
  std::vector<int> degrees;  // row-major, rows along y

  int at(std::size_t column, std::size_t row) const { return degrees[row * columns + column]; }
  Point center(std::size_t column, std::size_t row) const;
  int min_degree() const;
  int max_degree() const;

  // Cell extent along each axis; the last column/row may be partial.
  double width{0.0};
  double height{0.0};
};

/// Number of sensors k in [-m, m], m = ceil(r / d_pyl) + 1, whose sector contains @p p.
int point_coverage_degree(Point p, const SensorFieldConfig& cfg);

/// Throws std::invalid_argument when cell_size is not positive or exceeds the road width.
CoverageGrid build_grid(const SensorFieldConfig& cfg, double cell_size = kDefaultCellSize);

struct SweepPoint {
  double omega{0.0};
  double range{0.0};
};

struct BoundaryRow {
  double omega{0.0};
  double range{0.0};
  double alpha{0.0};
  std::vector<bool> analytic;  // index n-1 -> covered_with_degree(n)
  int numeric_min_degree{0};
  /// Per degree: distance in meters by which the band edges and the neighbor
  /// spacing must be perturbed before the analytic verdict flips (capped).
  std::vector<double> boundary_distance;
};

enum class AlphaRule { Fixed, MaxRotation };

struct SweepOptions {
  int n_max{3};
  double cell_size{kDefaultCellSize};
  AlphaRule alpha_rule{AlphaRule::MaxRotation};
  unsigned jobs{1};
};

/**
 * @brief Distance of a configuration to the analytic degree-@p n boundary.
 *
 * The verdict of covered_with_degree is re-evaluated with the road band grown
 * (or shrunk) by delta on both sides and the n-neighbor spacing widened (or
 * narrowed) by delta, both in the direction that could flip it. The returned
 * value is the smallest such delta that flips it, searched up to @p cap.
 */
double analytic_boundary_distance(const SensorFieldConfig& cfg, int n, double cap = 5.0);

/// One row per (omega, r) with analytic verdicts for n = 1..n_max and the grid minimum.
std::vector<BoundaryRow> boundary_sweep(const std::vector<SweepPoint>& points,
                                        const SensorFieldConfig& base, const SweepOptions& options);

struct MismatchSummary {
  std::size_t comparisons{0};
  std::size_t mismatches{0};
  std::size_t mismatches_outside_band{0};
  double band{0.0};
  double max_mismatch_boundary_distance{0.0};
};

/// Compares analytic verdicts against (numeric_min_degree >= n); mismatches whose
/// boundary distance is at least @p band are reported separately.
MismatchSummary summarize_mismatches(const std::vector<BoundaryRow>& rows, double band);

}  // namespace roadside::coverage
