#include "roadside/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace roadside::traffic {

namespace {

constexpr std::uint64_t kTrafficStream = 0x7472616666696300ULL;  // "traffic"

constexpr std::array<std::string_view, kClassCount> kClassNames{
    "car", "truck", "bus", "car_trailer", "truck_trailer"};

// Right-most running lane carries most of the heavy traffic.
constexpr ClassMix kHeavyMix{0.80, 0.06, 0.01, 0.04, 0.09};
constexpr ClassMix kMiddleMix{0.92, 0.02, 0.01, 0.03, 0.02};
constexpr ClassMix kFastMix{0.97, 0.00, 0.01, 0.02, 0.00};

const Vehicle* find_vehicle(const WorldState& state, VehicleId id) {
  auto it = std::lower_bound(state.vehicles.begin(), state.vehicles.end(), id,
                             [](const Vehicle& v, VehicleId key) { return v.id < key; });
  return it != state.vehicles.end() && it->id == id ? &*it : nullptr;
}

// Free distance between the entry line and the rear of the last vehicle on the lane.
double entry_clearance(const WorldState& state, const LaneState& lane) {
  if (!lane.last_spawned) return std::numeric_limits<double>::infinity();
  const Vehicle* last = find_vehicle(state, *lane.last_spawned);
  return last ? last->rear_x : std::numeric_limits<double>::infinity();
}

ClassKind draw_class(const LaneSpec& lane, std::mt19937_64& rng) {
  std::discrete_distribution<int> pick(lane.class_mix.begin(), lane.class_mix.end());
  return static_cast<ClassKind>(pick(rng));
}

double draw_gap(const LaneSpec& lane, std::mt19937_64& rng) {
  const double floor_gap = min_spawn_gap(lane.speed);
  const double tail = lane.mean_gap - floor_gap;
  if (tail <= 0.0) return floor_gap;
  return floor_gap + std::exponential_distribution<double>(1.0 / tail)(rng);
}

Vehicle make_vehicle(WorldState& state, const ScenarioConfig& scenario, const LaneSpec& lane,
                     ClassKind kind, double front_x) {
  const auto& cls = scenario.classes[static_cast<std::size_t>(kind)];
  Vehicle v;
  v.id = state.next_id++;
  v.kind = kind;
  v.length = cls.length;
  v.width = cls.width;
  v.lane = lane.index;
  v.center_y = lane.center_y;
  v.rear_x = front_x - cls.length;
  v.speed = lane.speed;
  return v;
}

std::vector<LaneSpec> layout_lanes(const geometry::SensorFieldConfig& road, double flow,
                                   double speed, bool emergency_open, SpawnMode mode,
                                   double mean_gap) {
  constexpr int kLanes = 4;  // emergency lane + three running lanes
  const double width = road.road_width_droad / kLanes;
  std::vector<LaneSpec> lanes;
  const int first_open = emergency_open ? 0 : 1;
  for (int i = 0; i < kLanes; ++i) {
    LaneSpec lane;
    lane.index = i;
    lane.center_y = road.sensor_to_road_dsr + (i + 0.5) * width;
    lane.open = i >= first_open;
    lane.flow = lane.open && mode == SpawnMode::Arrivals ? flow : 0.0;
    lane.speed = speed;
    lane.spawn = mode;
    lane.mean_gap = mode == SpawnMode::GapSampling ? mean_gap : 0.0;
    if (i == first_open) {
      lane.class_mix = kHeavyMix;
    } else if (i == kLanes - 1) {
      lane.class_mix = kFastMix;
    } else {
      lane.class_mix = kMiddleMix;
    }
    lanes.push_back(lane);
  }
  return lanes;
}

}  // namespace

std::string_view class_name(ClassKind kind) { return kClassNames[static_cast<std::size_t>(kind)]; }

std::optional<ClassKind> parse_class(std::string_view name) {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    if (kClassNames[i] == name) return static_cast<ClassKind>(i);
  }
  return std::nullopt;
}

ClassTable default_classes() {
  return {{{ClassKind::Car, 4.5, 1.8},
           {ClassKind::Truck, 12.0, 2.5},
           {ClassKind::Bus, 13.0, 2.55},
           {ClassKind::CarTrailer, 10.0, 1.8},
           {ClassKind::TruckTrailer, 18.5, 2.5}}};
}

std::vector<std::string> builtin_scenario_names() {
  return {"christmas_eve", "tuesday_morning", "traffic_jam"};
}

std::optional<ScenarioConfig> builtin_scenario(std::string_view name,
                                               const geometry::SensorFieldConfig& road) {
  ScenarioConfig s;
  s.name = std::string(name);
  if (name == "christmas_eve") {
    s.lanes = layout_lanes(road, 150.0, 33.0, false, SpawnMode::Arrivals, 0.0);
    s.duration = 7200.0;
  } else if (name == "tuesday_morning") {
    s.lanes = layout_lanes(road, 1200.0, 27.0, true, SpawnMode::Arrivals, 0.0);
    s.duration = 1800.0;
  } else if (name == "traffic_jam") {
    s.lanes = layout_lanes(road, 0.0, 2.8, false, SpawnMode::GapSampling, 8.0);
    s.duration = 3600.0;
  } else {
    return std::nullopt;
  }
  return s;
}

std::vector<Violation> check(const ScenarioConfig& scenario,
                             const geometry::SensorFieldConfig& road) {
  std::vector<Violation> out;
  if (scenario.lanes.empty()) out.push_back({"lanes", "at least one lane is required"});
  const double band_lo = road.sensor_to_road_dsr;
  const double band_hi = road.sensor_to_road_dsr + road.road_width_droad;
  for (std::size_t i = 0; i < scenario.lanes.size(); ++i) {
    const auto& lane = scenario.lanes[i];
    const std::string path = fmt::format("lanes[{}]", i);
    double sum = 0.0;
    bool negative = false;
    for (double p : lane.class_mix) {
      sum += p;
      negative = negative || !(p >= 0.0);
    }
    if (negative || std::abs(sum - 1.0) > 1e-9) {
      out.push_back({path + ".class_mix",
                     fmt::format("probabilities must be >= 0 and sum to 1 (sum = {})", sum)});
    }
    if (!(lane.speed >= 0.0)) out.push_back({path + ".speed", "must be >= 0"});
    if (!(lane.flow >= 0.0)) out.push_back({path + ".flow", "must be >= 0"});
    if (!lane.open && lane.flow != 0.0) {
      out.push_back({path + ".flow", "closed lanes must have flow 0"});
    }
    if (!(lane.center_y >= band_lo && lane.center_y <= band_hi)) {
      out.push_back({path + ".center_y",
                     fmt::format("must lie inside the road band [{}, {}]", band_lo, band_hi)});
    }
    if (lane.spawn == SpawnMode::GapSampling && !(lane.mean_gap > 0.0)) {
      out.push_back({path + ".mean_gap", "gap-sampled lanes need a mean gap > 0"});
    }
  }
  for (std::size_t k = 0; k < kClassCount; ++k) {
    const auto& cls = scenario.classes[k];
    if (!(cls.length > 0.0) || !(cls.width > 0.0)) {
      out.push_back({fmt::format("vehicle_classes.{}", kClassNames[k]),
                     "length and width must be > 0"});
    }
  }
  if (!(scenario.segment_length > 0.0)) out.push_back({"segment_length", "must be > 0"});
  if (!(scenario.eval_region.lo >= 0.0 && scenario.eval_region.lo < scenario.eval_region.hi &&
        scenario.eval_region.hi <= scenario.segment_length)) {
    out.push_back({"eval_region", "must satisfy 0 <= lo < hi <= segment_length"});
  }
  if (!(scenario.dt_radar > 0.0)) out.push_back({"dt_radar", "must be > 0"});
  if (!(scenario.dt_vision > 0.0)) out.push_back({"dt_vision", "must be > 0"});
  if (!(scenario.duration > 0.0)) out.push_back({"duration", "must be > 0"});
  if (scenario.target_vehicle_count < 0) {
    out.push_back({"target_vehicle_count", "must be >= 0"});
  }
  return out;
}

double min_spawn_gap(double speed) { return 2.0 + 1.0 * speed; }

WorldState make_world(const ScenarioConfig& scenario) {
  WorldState state;
  state.lanes.resize(scenario.lanes.size());
  return state;
}

std::vector<Vehicle> spawn_step(WorldState& state, const ScenarioConfig& scenario, int lane_index,
                                double dt, std::mt19937_64& rng) {
  const auto& lane = scenario.lanes.at(static_cast<std::size_t>(lane_index));
  auto& lane_state = state.lanes.at(static_cast<std::size_t>(lane_index));
  std::vector<Vehicle> spawned;
  if (!lane.open) return spawned;

  const double clearance = entry_clearance(state, lane_state);
  if (lane.spawn == SpawnMode::Arrivals) {
    const double p = std::min(1.0, lane.flow * dt / 3600.0);
    if (p > 0.0 && std::bernoulli_distribution(p)(rng)) {
      ++lane_state.pending_arrivals;
      ++state.arrivals;
    }
    if (lane_state.pending_arrivals == 0 || clearance < min_spawn_gap(lane.speed)) return spawned;
    --lane_state.pending_arrivals;
  } else {
    if (clearance < lane_state.next_gap) return spawned;
    ++state.arrivals;
    lane_state.next_gap = draw_gap(lane, rng);
  }

  spawned.push_back(make_vehicle(state, scenario, lane, draw_class(lane, rng), 0.0));
  lane_state.last_spawned = spawned.back().id;
  state.vehicles.push_back(spawned.back());
  ++state.spawned;
  return spawned;
}

void advance(WorldState& state, const ScenarioConfig& scenario, double dt) {
  const double finish = scenario.eval_region.hi;
  for (auto& v : state.vehicles) {
    const double before = v.rear_x;
    v.rear_x += v.speed * dt;
    if (before < finish && v.rear_x >= finish) ++state.traversed;
  }
  std::erase_if(state.vehicles,
                [&](const Vehicle& v) { return v.rear_x > scenario.segment_length; });
  state.time += dt;
}

std::vector<VehicleId> ground_truth(const WorldState& state, Interval region) {
  std::vector<VehicleId> ids;
  for (const auto& v : state.vehicles) {
    if (v.rear_x >= region.lo && v.rear_x + v.length <= region.hi) ids.push_back(v.id);
  }
  return ids;
}

TrafficSimulation::TrafficSimulation(ScenarioConfig scenario, std::uint64_t seed)
    : scenario_(std::move(scenario)),
      world_(make_world(scenario_)),
      rng_(derive_seed(seed, kTrafficStream)) {}

void TrafficSimulation::populate(double dt) {
  // Gap-sampled lanes: place a queue from the downstream end back to the entry.
  for (std::size_t i = 0; i < scenario_.lanes.size(); ++i) {
    const auto& lane = scenario_.lanes[i];
    if (!lane.open || lane.spawn != SpawnMode::GapSampling) continue;
    double front = scenario_.segment_length;
    std::vector<Vehicle> queue;
    while (true) {
      Vehicle v = make_vehicle(world_, scenario_, lane, draw_class(lane, rng_), front);
      if (v.rear_x < 0.0) {
        --world_.next_id;
        break;
      }
      front = v.rear_x - draw_gap(lane, rng_);
      queue.push_back(v);
    }
    // IDs grow downstream-first here; keep the vector sorted by id.
    for (const auto& v : queue) world_.vehicles.push_back(v);
    if (!queue.empty()) world_.lanes[i].last_spawned = queue.back().id;
    world_.lanes[i].next_gap = draw_gap(lane, rng_);
  }

  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& lane : scenario_.lanes) {
    if (lane.open && lane.spawn == SpawnMode::Arrivals && lane.flow > 0.0 && lane.speed > 0.0) {
      slowest = std::min(slowest, lane.speed);
    }
  }
  if (std::isfinite(slowest)) {
    const auto steps = static_cast<long>(std::ceil(scenario_.segment_length / slowest / dt));
    for (long k = 0; k < steps; ++k) step(dt);
  }
  world_.time = 0.0;
  world_.traversed = 0;
}

void TrafficSimulation::step(double dt) {
  advance(world_, scenario_, dt);
  for (std::size_t i = 0; i < scenario_.lanes.size(); ++i) {
    spawn_step(world_, scenario_, static_cast<int>(i), dt, rng_);
  }
}

}  // namespace roadside::traffic
