#include "roadside/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roadside/parallel.hpp"

namespace roadside::coverage {

namespace {

constexpr double kEdgeTolerance = 1e-12;

// Number of cells needed to tile `extent`, tolerant to 50 / 0.25 style rounding.
std::size_t cell_count(double extent, double cell) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(extent / cell - 1e-9)));
}

// Midpoint of cell i, clipped to the extent for a partial last cell.
double cell_center(std::size_t i, double cell, double extent) {
  const double lo = static_cast<double>(i) * cell;
  const double hi = std::min(lo + cell, extent);
  return 0.5 * (lo + hi);
}

}  // namespace

Point CoverageGrid::center(std::size_t column, std::size_t row) const {
  const double span_x = width;
  const double span_y = height;
  return {origin.x + cell_center(column, cell_size, span_x),
          origin.y + cell_center(row, cell_size, span_y)};
}

int CoverageGrid::min_degree() const {
  return degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
}

int CoverageGrid::max_degree() const {
  return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
}

int point_coverage_degree(Point p, const SensorFieldConfig& cfg) {
  const double r = cfg.range_r;
  if (!(r > 0.0)) return 0;
  const double spacing = cfg.sensor_spacing_dpyl;
  const double beta = cfg.opening_omega / 2.0 + cfg.rotation_alpha;
  const double gamma = cfg.opening_omega / 2.0 - cfg.rotation_alpha;
  const auto m = static_cast<long>(std::ceil(r / spacing)) + 1;
  const auto home = static_cast<long>(std::floor(p.x / spacing));
  const double r2 = r * r * (1.0 + kEdgeTolerance);

  int degree = 0;
  for (long k = home - m; k <= home + m; ++k) {
    const double dx = p.x - static_cast<double>(k) * spacing;
    const double dy = p.y;
    if (dx * dx + dy * dy > r2) continue;
    const double bearing = std::atan2(dx, dy);
    if (bearing >= -gamma - kEdgeTolerance && bearing <= beta + kEdgeTolerance) ++degree;
  }
  return degree;
}

CoverageGrid build_grid(const SensorFieldConfig& cfg, double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be > 0");
  if (cell_size > cfg.road_width_droad * (1.0 + 1e-12)) {
    throw std::invalid_argument("cell_size must not exceed the road width");
  }
  CoverageGrid grid;
  grid.cell_size = cell_size;
  grid.origin = {0.0, cfg.sensor_to_road_dsr};
  grid.width = cfg.sensor_spacing_dpyl;
  grid.height = cfg.road_width_droad;
  grid.columns = cell_count(grid.width, cell_size);
  grid.rows = cell_count(grid.height, cell_size);
  grid.degrees.resize(grid.columns * grid.rows);
  for (std::size_t row = 0; row < grid.rows; ++row) {
    for (std::size_t col = 0; col < grid.columns; ++col) {
      grid.degrees[row * grid.columns + col] = point_coverage_degree(grid.center(col, row), cfg);
    }
  }
  return grid;
}

double analytic_boundary_distance(const SensorFieldConfig& cfg, int n, double cap) {
  const bool nominal = geometry::covered_with_degree(cfg, n);
  const double spacing = n * cfg.sensor_spacing_dpyl;
  // Covered configs are pushed towards "harder", uncovered ones towards "easier".
  const double sign = nominal ? 1.0 : -1.0;
  cap = std::min(cap, nominal ? cap : 0.5 * cfg.road_width_droad * (1.0 - 1e-9));
  cap = std::min(cap, nominal ? cap : spacing * (1.0 - 1e-9));

  auto flips = [&](double delta) {
    SensorFieldConfig perturbed = cfg;
    perturbed.sensor_to_road_dsr -= sign * delta;
    perturbed.road_width_droad += 2.0 * sign * delta;
    return geometry::covered_at_spacing(perturbed, spacing + sign * delta) != nominal;
  };

  if (!flips(cap)) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int i = 0; i < 60 && hi - lo > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    (flips(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<BoundaryRow> boundary_sweep(const std::vector<SweepPoint>& points,
                                        const SensorFieldConfig& base, const SweepOptions& options) {
  if (options.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<BoundaryRow> rows(points.size());
  parallel_for(points.size(), options.jobs, [&](std::size_t i) {
    SensorFieldConfig cfg = base;
    cfg.opening_omega = points[i].omega;
    cfg.range_r = points[i].range;
    if (options.alpha_rule == AlphaRule::MaxRotation) {
      cfg.rotation_alpha = geometry::max_rotation(cfg.opening_omega);
    }
    BoundaryRow row;
    row.omega = cfg.opening_omega;
    row.range = cfg.range_r;
    row.alpha = cfg.rotation_alpha;
    for (int n = 1; n <= options.n_max; ++n) {
      row.analytic.push_back(geometry::covered_with_degree(cfg, n));
      row.boundary_distance.push_back(analytic_boundary_distance(cfg, n));
    }
    row.numeric_min_degree = build_grid(cfg, options.cell_size).min_degree();
    rows[i] = std::move(row);
  });
  return rows;
}

MismatchSummary summarize_mismatches(const std::vector<BoundaryRow>& rows, double band) {
  MismatchSummary summary;
  summary.band = band;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.analytic.size(); ++k) {
      const int n = static_cast<int>(k) + 1;
      ++summary.comparisons;
      if (row.analytic[k] == (row.numeric_min_degree >= n)) continue;
      ++summary.mismatches;
      const double distance = row.boundary_distance[k];
      summary.max_mismatch_boundary_distance =
          std::max(summary.max_mismatch_boundary_distance, distance);
      if (distance >= band) ++summary.mismatches_outside_band;
    }
  }
  return summary;
}

}  // namespace roadside::coverage
