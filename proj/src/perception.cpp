#include "roadside/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

namespace roadside::perception {

namespace {

constexpr double kBearingSlack = 1e-9;
constexpr std::uint64_t kRadarStream = 0x7261646172000000ULL;  // "radar"

double point_rect_distance(Vec2 p, const Rect& r) {
  const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
  const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
  return std::hypot(dx, dy);
}

// Liang-Barsky clip step; false when the segment is entirely outside this slab side.
bool clip(double p, double q, double& t0, double& t1) {
  if (p == 0.0) return q >= 0.0;
  const double t = q / p;
  if (p < 0.0) {
    if (t > t1) return false;
    t0 = std::max(t0, t);
  } else {
    if (t < t0) return false;
    t1 = std::min(t1, t);
  }
  return true;
}

}  // namespace

bool Sensor::contains(Vec2 p) const {
  const Vec2 d = p - position;
  if (d.x * d.x + d.y * d.y > range * range) return false;
  const double b = std::atan2(d.x, d.y);
  return b >= bearing_min - kBearingSlack && b <= bearing_max + kBearingSlack;
}

std::vector<Sensor> sensor_array(const geometry::SensorFieldConfig& cfg, double segment_length) {
  std::vector<Sensor> sensors;
  const double spacing = cfg.sensor_spacing_dpyl;
  const auto count = static_cast<int>(std::floor(segment_length / spacing + 1e-9)) + 1;
  for (int k = 0; k < count; ++k) {
    Sensor s;
    s.index = k;
    s.position = {k * spacing, 0.0};
    s.range = cfg.range_r;
    s.bearing_min = -(cfg.opening_omega / 2.0 - cfg.rotation_alpha);
    s.bearing_max = cfg.opening_omega / 2.0 + cfg.rotation_alpha;
    sensors.push_back(s);
  }
  return sensors;
}

RadarModel RadarModel::for_opening(double omega) {
  RadarModel model;
  model.azimuth_resolution = omega / 12.0;
  return model;
}

long RadarModel::resolution_cells(double range) const {
  return static_cast<long>(azimuth_bins) *
         static_cast<long>(std::ceil(range / radial_resolution - 1e-12));
}

Covariance2 polar_covariance(double range, double bearing, double sigma_range,
                             double sigma_bearing) {
  const double s = std::sin(bearing);
  const double c = std::cos(bearing);
  const double vr = sigma_range * sigma_range;
  const double vb = sigma_bearing * sigma_bearing * range * range;
  return {vr * s * s + vb * c * c, (vr - vb) * s * c, vr * c * c + vb * s * s};
}

std::vector<Vec2> perimeter_cells(const Rect& rect, double cell) {
  const std::array<std::pair<Vec2, Vec2>, 4> edges{{
      {{rect.x0, rect.y0}, {rect.x1, rect.y0}},
      {{rect.x1, rect.y0}, {rect.x1, rect.y1}},
      {{rect.x1, rect.y1}, {rect.x0, rect.y1}},
      {{rect.x0, rect.y1}, {rect.x0, rect.y0}},
  }};
  std::vector<Vec2> cells;
  for (const auto& [a, b] : edges) {
    const double length = (b - a).norm();
    const auto n = static_cast<int>(std::max(1.0, std::ceil(length / cell - 1e-9)));
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      cells.push_back(a + t * (b - a));
    }
  }
  return cells;
}

bool segment_hits_rect(Vec2 a, Vec2 b, const Rect& rect) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t0 = 0.0;
  double t1 = 1.0;
  return clip(-dx, a.x - rect.x0, t0, t1) && clip(dx, rect.x1 - a.x, t0, t1) &&
         clip(-dy, a.y - rect.y0, t0, t1) && clip(dy, rect.y1 - a.y, t0, t1) && t0 <= t1;
}

std::vector<Vec2> visible_cells(const Sensor& sensor, const Vehicle& target,
                                std::span<const Vehicle> occluders, const LosModel& los) {
  std::vector<Vec2> visible;
  for (const Vec2& cell : perimeter_cells(target.bounds(), los.cell_size)) {
    if (!sensor.contains(cell)) continue;
    const bool blocked = std::any_of(occluders.begin(), occluders.end(), [&](const Vehicle& o) {
      return segment_hits_rect(sensor.position, cell, o.bounds());
    });
    if (!blocked) visible.push_back(cell);
  }
  return visible;
}

OcclusionScene::OcclusionScene(const Sensor& sensor, std::span<const Vehicle> vehicles)
    : sensor_(&sensor), vehicles_(vehicles) {
  extents_.reserve(vehicles.size());
  const Vec2 s = sensor.position;
  for (const auto& v : vehicles) {
    const Rect r = v.bounds();
    Extent e;
    e.near = point_rect_distance(s, r);
    e.reachable = e.near <= sensor.range;
    if (r.y0 <= s.y) {
      // Straddles the sensor line: bearings may wrap, keep it as a candidate everywhere.
      e.bearing_lo = -std::numbers::pi;
      e.bearing_hi = std::numbers::pi;
    } else {
      const std::array<Vec2, 4> corners{{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}}};
      e.bearing_lo = std::numbers::pi;
      e.bearing_hi = -std::numbers::pi;
      for (const Vec2& c : corners) {
        const double b = sensor.bearing_to(c);
        e.bearing_lo = std::min(e.bearing_lo, b);
        e.bearing_hi = std::max(e.bearing_hi, b);
        e.far = std::max(e.far, (c - s).norm());
      }
    }
    if (e.far == 0.0) e.far = std::numeric_limits<double>::infinity();
    extents_.push_back(e);
  }
}

template <typename Visit>
void OcclusionScene::scan(std::size_t target, const LosModel& los, Visit&& visit) const {
  const Extent& te = extents_[target];
  const Sensor& sensor = *sensor_;
  if (!te.reachable || te.bearing_hi < sensor.bearing_min - kBearingSlack ||
      te.bearing_lo > sensor.bearing_max + kBearingSlack) {
    return;
  }

  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < vehicles_.size(); ++j) {
    if (j == target) continue;
    const Extent& oe = extents_[j];
    if (oe.bearing_hi < te.bearing_lo || oe.bearing_lo > te.bearing_hi) continue;
    if (oe.near >= te.far) continue;
    candidates.push_back(j);
  }

  for (const Vec2& cell : perimeter_cells(vehicles_[target].bounds(), los.cell_size)) {
    if (!sensor.contains(cell)) continue;
    const double bearing = sensor.bearing_to(cell);
    const double distance = (cell - sensor.position).norm();
    bool blocked = false;
    for (std::size_t j : candidates) {
      const Extent& oe = extents_[j];
      if (bearing < oe.bearing_lo - kBearingSlack || bearing > oe.bearing_hi + kBearingSlack ||
          oe.near > distance) {
        continue;
      }
      if (segment_hits_rect(sensor.position, cell, vehicles_[j].bounds())) {
        blocked = true;
        break;
      }
    }
    if (!blocked && !visit(cell)) return;
  }
}

std::vector<Vec2> OcclusionScene::visible_cells(std::size_t target, const LosModel& los) const {
  std::vector<Vec2> visible;
  scan(target, los, [&](Vec2 cell) {
    visible.push_back(cell);
    return true;
  });
  return visible;
}

bool OcclusionScene::any_visible(std::size_t target, const LosModel& los) const {
  bool found = false;
  scan(target, los, [&](Vec2) {
    found = true;
    return false;
  });
  return found;
}

std::vector<VehicleId> los_detect(const Sensor& sensor, const WorldState& world,
                                  const LosModel& los) {
  const OcclusionScene scene(sensor, world.vehicles);
  std::vector<VehicleId> ids;
  for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
    if (scene.any_visible(i, los)) ids.push_back(world.vehicles[i].id);
  }
  return ids;
}

std::mt19937_64 sensor_rng(std::uint64_t seed, std::uint64_t frame, int sensor_index) {
  return std::mt19937_64(
      derive_seed(seed, kRadarStream + static_cast<std::uint64_t>(sensor_index), frame));
}

std::vector<Detection> radar_detect(const Sensor& sensor, const WorldState& world,
                                    const LosModel& los, const RadarModel& radar,
                                    std::mt19937_64& rng, double time) {
  const OcclusionScene scene(sensor, world.vehicles);
  return radar_detect(scene, sensor, los, radar, rng, time);
}

std::vector<Detection> radar_detect(const OcclusionScene& scene, const Sensor& sensor,
                                    const LosModel& los, const RadarModel& radar,
                                    std::mt19937_64& rng, double time) {
  struct Return {
    Vec2 position;
    double range{0.0};
    double bearing{0.0};
    VehicleId primary{0};
    std::vector<VehicleId> ids;
  };
  std::map<std::pair<long, long>, Return> bins;
  const auto vehicles = scene.vehicles();
  const long last_bin = radar.azimuth_bins - 1;

  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto cells = scene.visible_cells(i, los);
    if (cells.empty()) continue;
    Vec2 centroid;
    for (const Vec2& c : cells) centroid = centroid + c;
    centroid = (1.0 / static_cast<double>(cells.size())) * centroid;

    const double range = (centroid - sensor.position).norm();
    const double bearing = sensor.bearing_to(centroid);
    const auto range_bin = static_cast<long>(std::floor(range / radar.radial_resolution));
    const auto azimuth_bin = std::clamp(
        static_cast<long>(std::floor((bearing - sensor.bearing_min) / radar.azimuth_resolution)),
        0L, last_bin);

    const VehicleId id = vehicles[i].id;
    auto [it, inserted] = bins.try_emplace({range_bin, azimuth_bin});
    Return& ret = it->second;
    ret.ids.push_back(id);
    if (inserted || range < ret.range) {
      ret.position = centroid;
      ret.range = range;
      ret.bearing = bearing;
      ret.primary = id;
    }
  }

  const double sigma_r = radar.sigma_range();
  const double sigma_b = radar.sigma_azimuth();
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  std::vector<Detection> detections;
  detections.reserve(bins.size());
  for (auto& [bin, ret] : bins) {
    Detection det;
    det.sensor_index = sensor.index;
    det.time = time;
    det.primary_id = ret.primary;
    std::sort(ret.ids.begin(), ret.ids.end());
    det.source_ids = std::move(ret.ids);
    double range = ret.range;
    double bearing = ret.bearing;
    if (radar.noise) {
      range += sigma_r * unit_normal(rng);
      bearing += sigma_b * unit_normal(rng);
      det.position = sensor.position + range * Vec2{std::sin(bearing), std::cos(bearing)};
    } else {
      det.position = ret.position;
    }
    det.covariance = polar_covariance(std::max(range, 0.0), bearing, sigma_r, sigma_b);
    detections.push_back(std::move(det));
  }

  if (radar.false_alarms && radar.false_alarm_rate > 0.0 && sensor.range > 0.0) {
    const double mean =
        radar.false_alarm_rate * static_cast<double>(radar.resolution_cells(sensor.range));
    const int count = std::poisson_distribution<int>(mean)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < count; ++k) {
      const double range = sensor.range * std::sqrt(unit(rng));
      const double bearing = sensor.bearing_min + unit(rng) * sensor.opening();
      Detection det;
      det.sensor_index = sensor.index;
      det.time = time;
      det.is_false_alarm = true;
      det.position = sensor.position + range * Vec2{std::sin(bearing), std::cos(bearing)};
      det.covariance = polar_covariance(range, bearing, sigma_r, sigma_b);
      detections.push_back(std::move(det));
    }
  }
  return detections;
}

}  // namespace roadside::perception
