/**
 * @file perception.hpp
 * @brief Line-of-sight occlusion engine and a generic RADAR detection generator.
 */
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "roadside/common.hpp"
#include "roadside/geometry.hpp"
#include "roadside/traffic.hpp"

namespace roadside::perception {

using traffic::Vehicle;
using traffic::WorldState;

/// A sensor at `position` whose sector spans bearings [bearing_min, bearing_max],
/// bearings measured from +y towards +x.
struct Sensor {
  int index{0};
  Vec2 position;
  double range{0.0};
  double bearing_min{0.0};  ///< -gamma
  double bearing_max{0.0};  ///< +beta

  double opening() const { return bearing_max - bearing_min; }
  double bearing_to(Vec2 p) const { return std::atan2(p.x - position.x, p.y - position.y); }
  bool contains(Vec2 p) const;
};

/// Sensors at (k * d_pyl, 0) for k = 0 .. floor(segment_length / d_pyl).
std::vector<Sensor> sensor_array(const geometry::SensorFieldConfig& cfg, double segment_length);

struct LosModel {
  double cell_size{0.05};
};

struct RadarModel {
  double azimuth_resolution{0.0};
  double radial_resolution{1.0};
  double false_alarm_rate{1e-6};  ///< per resolution cell per scan
  double rcs{1.0};                ///< constant over the vehicle; carried, not used for detection
  int azimuth_bins{12};
  bool noise{true};
  bool false_alarms{true};

  /// Azimuth resolution omega / 12 (fixed antenna count).
  static RadarModel for_opening(double omega);

  double sigma_range() const { return 0.5 * radial_resolution; }
  double sigma_azimuth() const { return 0.5 * azimuth_resolution; }
  /// azimuth_bins * ceil(range / radial_resolution)
  long resolution_cells(double range) const;
};

/// 2x2 symmetric covariance stored as (xx, xy, yy).
using Covariance2 = std::array<double, 3>;

struct Detection {
  int sensor_index{0};
  double time{0.0};
  Vec2 position;
  std::vector<VehicleId> source_ids;  ///< ascending; empty for false alarms
  VehicleId primary_id{0};            ///< member whose position was kept; 0 for false alarms
  bool is_false_alarm{false};
  Covariance2 covariance{0.0, 0.0, 0.0};  ///< Cartesian measurement noise
};

/// Cartesian covariance of a polar (range, bearing) measurement with the given sigmas.
Covariance2 polar_covariance(double range, double bearing, double sigma_range,
                             double sigma_bearing);

/// Cell centers along the rectangle outline, `cell` apart.
std::vector<Vec2> perimeter_cells(const Rect& rect, double cell);

/// True iff the segment from a to b meets the closed rectangle.
bool segment_hits_rect(Vec2 a, Vec2 b, const Rect& rect);

/**
 * @brief Visible perimeter cells of @p target: cells inside the sector whose
 *        ray to the sensor crosses none of @p occluders.
 *
 * @p occluders must not contain the target itself.
 */
std::vector<Vec2> visible_cells(const Sensor& sensor, const Vehicle& target,
                                std::span<const Vehicle> occluders, const LosModel& los);

/**
 * @brief One sensor's view of a world snapshot with per-vehicle angular
 *        extents cached, so occluder candidates can be pruned by bearing and range.
 */
class OcclusionScene {
 public:
  OcclusionScene(const Sensor& sensor, std::span<const Vehicle> vehicles);

  /// Same contract as visible_cells() with every other vehicle as occluder.
  std::vector<Vec2> visible_cells(std::size_t target, const LosModel& los) const;
  bool any_visible(std::size_t target, const LosModel& los) const;

  std::span<const Vehicle> vehicles() const { return vehicles_; }

 private:
  struct Extent {
    double bearing_lo{0.0};
    double bearing_hi{0.0};
    double near{0.0};
    double far{0.0};
    bool reachable{false};
  };

  template <typename Visit>
  void scan(std::size_t target, const LosModel& los, Visit&& visit) const;

  const Sensor* sensor_;
  std::span<const Vehicle> vehicles_;
  std::vector<Extent> extents_;
};

/// IDs (ascending) of vehicles with at least one visible cell for this sensor.
std::vector<VehicleId> los_detect(const Sensor& sensor, const WorldState& world,
                                  const LosModel& los);

/// Independent stream per (run seed, frame, sensor).
std::mt19937_64 sensor_rng(std::uint64_t seed, std::uint64_t frame, int sensor_index);

/**
 * @brief RADAR detections of one sensor for one scan.
 *
 * Visible vehicles yield a reference point at the centroid of their visible
 * cells; reference points sharing a (range, azimuth) resolution bin merge into
 * one detection at the nearest member; detections get polar Gaussian noise of
 * half a resolution cell; false alarms are Poisson over the sector's cells.
 */
std::vector<Detection> radar_detect(const Sensor& sensor, const WorldState& world,
                                    const LosModel& los, const RadarModel& radar,
                                    std::mt19937_64& rng, double time = 0.0);

/// Same as radar_detect on a prepared scene.
std::vector<Detection> radar_detect(const OcclusionScene& scene, const Sensor& sensor,
                                    const LosModel& los, const RadarModel& radar,
                                    std::mt19937_64& rng, double time = 0.0);

}  // namespace roadside::perception
