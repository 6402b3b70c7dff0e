/**
 * @file traffic.hpp
 * @brief Lane-based highway population with constant per-lane speeds.
 *
 * Vehicles enter at x = 0 (front bumper on the upstream boundary), drive
 * towards +x and leave once their rear passes segment_length. There are no
 * lane changes and no car-following dynamics.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "roadside/common.hpp"
#include "roadside/geometry.hpp"

namespace roadside::traffic {

using geometry::Violation;

enum class ClassKind { Car = 0, Truck, Bus, CarTrailer, TruckTrailer };
inline constexpr std::size_t kClassCount = 5;

struct VehicleClass {
  ClassKind kind{ClassKind::Car};
  double length{4.5};
  double width{1.8};
};

using ClassTable = std::array<VehicleClass, kClassCount>;
using ClassMix = std::array<double, kClassCount>;

std::string_view class_name(ClassKind kind);
std::optional<ClassKind> parse_class(std::string_view name);
ClassTable default_classes();

enum class SpawnMode {
  Arrivals,     ///< Bernoulli arrival per step with probability flow * dt / 3600
  GapSampling,  ///< next vehicle enters once the sampled net gap has opened
};

struct LaneSpec {
  int index{0};  ///< 0 = nearest to the sensors
  double center_y{0.0};
  double flow{0.0};  ///< vehicles per hour
  double speed{0.0};  ///< m/s
  ClassMix class_mix{1.0, 0.0, 0.0, 0.0, 0.0};
  bool open{true};
  SpawnMode spawn{SpawnMode::Arrivals};
  double mean_gap{0.0};  ///< mean net gap in meters, GapSampling only
};

struct Interval {
  double lo{0.0};
  double hi{0.0};
};

struct ScenarioConfig {
  std::string name;
  std::vector<LaneSpec> lanes;
  ClassTable classes{default_classes()};
  double segment_length{500.0};
  Interval eval_region{100.0, 400.0};
  std::uint64_t seed{0};
  double duration{1800.0};  ///< simulated-time budget before a run times out
  double dt_radar{0.1};
  double dt_vision{0.05};
  int target_vehicle_count{100};
};

/// Built-in scenarios: "christmas_eve", "tuesday_morning", "traffic_jam".
std::vector<std::string> builtin_scenario_names();
/// Lanes are laid out across the band [d_sr, d_sr + d_road] of @p road.
std::optional<ScenarioConfig> builtin_scenario(std::string_view name,
                                               const geometry::SensorFieldConfig& road);

/// Field paths are relative to the scenario ("lanes[1].class_mix", ...).
std::vector<Violation> check(const ScenarioConfig& scenario,
                             const geometry::SensorFieldConfig& road);

/// Minimum spawn gap: 2 m + 1 s of headway at the lane speed.
double min_spawn_gap(double speed);

struct Vehicle {
  VehicleId id{0};
  ClassKind kind{ClassKind::Car};
  double length{0.0};
  double width{0.0};
  int lane{0};
  double center_y{0.0};
  double rear_x{0.0};
  double speed{0.0};

  Rect bounds() const {
    return {rear_x, rear_x + length, center_y - 0.5 * width, center_y + 0.5 * width};
  }
};

struct LaneState {
  std::optional<VehicleId> last_spawned;
  int pending_arrivals{0};
  double next_gap{0.0};
};

struct WorldState {
  double time{0.0};
  std::vector<Vehicle> vehicles;  ///< sorted by id
  std::vector<LaneState> lanes;
  VehicleId next_id{1};
  std::uint64_t arrivals{0};
  std::uint64_t spawned{0};
  std::uint64_t traversed{0};  ///< rears that crossed eval_region.hi
};

/// Empty world with one LaneState per lane.
WorldState make_world(const ScenarioConfig& scenario);

/**
 * @brief One spawn step on one lane.
 *
 * Arrivals: a Bernoulli draw with probability min(1, flow dt / 3600) queues an
 * arrival; the queue is released one vehicle at a time as soon as the previous
 * vehicle on the lane has cleared the entry by min_spawn_gap. GapSampling: the
 * next vehicle enters once the previous one has cleared the entry by a sampled
 * net gap (min_spawn_gap + exponential tail, mean = lane.mean_gap).
 * Closed lanes never spawn.
 */
std::vector<Vehicle> spawn_step(WorldState& state, const ScenarioConfig& scenario, int lane,
                                double dt, std::mt19937_64& rng);

/// Moves every vehicle by speed * dt and drops vehicles past the downstream end.
void advance(WorldState& state, const ScenarioConfig& scenario, double dt);

/// IDs (ascending) of vehicles whose rectangle lies fully inside [region.lo, region.hi].
std::vector<VehicleId> ground_truth(const WorldState& state, Interval region);

/// Owns the world and its RNG stream for one run.
class TrafficSimulation {
 public:
  TrafficSimulation(ScenarioConfig scenario, std::uint64_t seed);

  /// Pre-fills the road: gap-sampled lanes by direct placement, arrival lanes
  /// by running the dynamics for segment_length / speed seconds. Resets time to 0.
  void populate(double dt);

  /// advance() followed by spawn_step() on every lane.
  void step(double dt);

  const WorldState& world() const { return world_; }
  const ScenarioConfig& scenario() const { return scenario_; }

 private:
  ScenarioConfig scenario_;
  WorldState world_;
  std::mt19937_64 rng_;
};

}  // namespace roadside::traffic
