#include "roadside/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <map>
#include <tuple>

#include "roadside/parallel.hpp"

namespace roadside::experiments {

namespace {

constexpr std::array<std::string_view, 3> kPipelineNames{"vision", "radar", "radar_tracking"};

struct Cadence {
  double traffic_dt{0.0};
  long stride{1};  ///< pipeline evaluates every stride-th traffic step
};

Cadence cadence(const ScenarioConfig& scenario, Pipeline pipeline) {
  const double own = pipeline == Pipeline::Vision ? scenario.dt_vision : scenario.dt_radar;
  const double lo = std::min(scenario.dt_vision, scenario.dt_radar);
  const double hi = std::max(scenario.dt_vision, scenario.dt_radar);
  const double ratio = hi / lo;
  const double k = std::round(ratio);
  if (k >= 1.0 && std::abs(ratio - k) < 1e-9 * k) {
    return {lo, own == lo ? 1L : static_cast<long>(k)};
  }
  return {own, 1L};
}

bool can_deliver(const ScenarioConfig& scenario) {
  for (const auto& lane : scenario.lanes) {
    if (!lane.open || lane.speed <= 0.0) continue;
    if (lane.spawn == traffic::SpawnMode::GapSampling || lane.flow > 0.0) return true;
  }
  return false;
}

const traffic::Vehicle* find(const traffic::WorldState& world, VehicleId id) {
  auto it = std::lower_bound(world.vehicles.begin(), world.vehicles.end(), id,
                             [](const traffic::Vehicle& v, VehicleId x) { return v.id < x; });
  return it != world.vehicles.end() && it->id == id ? &*it : nullptr;
}

int count_in(const std::vector<VehicleId>& ground_truth, const std::vector<VehicleId>& detected) {
  int hits = 0;
  auto it = detected.begin();
  for (VehicleId id : ground_truth) {
    it = std::lower_bound(it, detected.end(), id);
    if (it != detected.end() && *it == id) ++hits;
  }
  return hits;
}

}  // namespace

std::string_view pipeline_name(Pipeline p) { return kPipelineNames[static_cast<std::size_t>(p)]; }

std::optional<Pipeline> parse_pipeline(std::string_view name) {
  for (std::size_t i = 0; i < kPipelineNames.size(); ++i) {
    if (kPipelineNames[i] == name) return static_cast<Pipeline>(i);
  }
  return std::nullopt;
}

void finalize(CompletenessReport& report) {
  double sum = 0.0;
  int counted = 0;
  for (const auto& s : report.per_step) {
    if (s.ground_truth <= 0) continue;
    sum += static_cast<double>(s.detected) / static_cast<double>(s.ground_truth);
    ++counted;
  }
  report.steps_counted = counted;
  report.flag_zero_gt = counted == 0;
  report.time_average = counted == 0 ? 1.0 : sum / counted;
}

CompletenessReport run_scenario(const SensorFieldConfig& cfg, const ScenarioConfig& scenario,
                                Pipeline pipeline, std::uint64_t seed,
                                const ModelOptions& models) {
  geometry::validate(cfg);

  CompletenessReport report;
  report.scenario = scenario.name;
  report.pipeline = pipeline;
  report.seed = seed;

  const int target = scenario.target_vehicle_count;
  if (target > 0 && !can_deliver(scenario)) {
    throw ScenarioTimeout(fmt::format(
        "scenario '{}' has no open lane with traffic; {} traversals can never happen",
        scenario.name, target));
  }

  const auto sensors = perception::sensor_array(cfg, scenario.segment_length);
  auto radar = perception::RadarModel::for_opening(cfg.opening_omega);
  radar.noise = models.radar_noise;
  radar.false_alarms = models.radar_false_alarms;
  radar.false_alarm_rate = models.false_alarm_rate;
  tracking::MultiObjectTracker tracker(models.tracker);

  const Cadence c = cadence(scenario, pipeline);
  traffic::TrafficSimulation sim(scenario, seed);
  sim.populate(c.traffic_dt);

  const auto max_steps = static_cast<long>(std::ceil(scenario.duration / c.traffic_dt - 1e-9));
  std::uint64_t frame = 0;
  std::vector<VehicleId> detected;
  std::vector<perception::Detection> scan;

  for (long step = 1; step <= max_steps; ++step) {
    sim.step(c.traffic_dt);
    const auto& world = sim.world();
    const double time = static_cast<double>(step) * c.traffic_dt;

    if (step % c.stride == 0) {
      const auto truth = traffic::ground_truth(world, scenario.eval_region);
      int hits = 0;

      if (pipeline == Pipeline::Vision) {
        // Only ground-truth vehicles can count, so the others are never tested as targets.
        std::vector<char> seen(truth.size(), 0);
        for (const auto& sensor : sensors) {
          const perception::OcclusionScene scene(sensor, world.vehicles);
          for (std::size_t k = 0; k < truth.size(); ++k) {
            if (seen[k]) continue;
            const auto* v = find(world, truth[k]);
            const auto index = static_cast<std::size_t>(v - world.vehicles.data());
            if (scene.any_visible(index, models.los)) seen[k] = 1;
          }
        }
        hits = static_cast<int>(std::count(seen.begin(), seen.end(), 1));
      } else {
        scan.clear();
        for (const auto& sensor : sensors) {
          auto rng = perception::sensor_rng(seed, frame, sensor.index);
          auto dets = perception::radar_detect(sensor, world, models.los, radar, rng, time);
          scan.insert(scan.end(), std::make_move_iterator(dets.begin()),
                      std::make_move_iterator(dets.end()));
        }
        ++frame;
        if (pipeline == Pipeline::Radar) {
          detected.clear();
          for (const auto& d : scan) {
            detected.insert(detected.end(), d.source_ids.begin(), d.source_ids.end());
          }
          std::sort(detected.begin(), detected.end());
          detected.erase(std::unique(detected.begin(), detected.end()), detected.end());
        } else {
          tracker.step(scan, static_cast<double>(c.stride) * c.traffic_dt);
          detected = tracker.tracked_ids();
        }
        hits = count_in(truth, detected);
      }
      report.per_step.push_back({time, static_cast<int>(truth.size()), hits});
    }

    report.traversed = world.traversed;
    report.simulated_time = time;
    if (target > 0 && world.traversed >= static_cast<std::uint64_t>(target)) {
      finalize(report);
      return report;
    }
  }

  if (target > 0) {
    throw ScenarioTimeout(fmt::format(
        "scenario '{}' timed out after {} s with {} of {} vehicles traversed", scenario.name,
        scenario.duration, report.traversed, target));
  }
  finalize(report);
  return report;
}

std::vector<geometry::Violation> check(const SweepSpec& spec) {
  std::vector<geometry::Violation> out;
  auto need = [&](bool ok, const char* field) {
    if (!ok) out.push_back({field, "must not be empty"});
  };
  need(!spec.ranges.empty(), "ranges");
  need(!spec.omegas.empty(), "omegas");
  need(!spec.scenarios.empty(), "scenarios");
  need(!spec.pipelines.empty(), "pipelines");
  need(!spec.seeds.empty(), "seeds");
  return out;
}

SensorFieldConfig sweep_config(const SensorFieldConfig& base, coverage::AlphaRule rule,
                               double omega, double range) {
  SensorFieldConfig cfg = base;
  cfg.opening_omega = omega;
  cfg.range_r = range;
  if (rule == coverage::AlphaRule::MaxRotation) cfg.rotation_alpha = geometry::max_rotation(omega);
  return cfg;
}

SweepResult sweep(const SweepSpec& spec, const SensorFieldConfig& base,
                  const ModelOptions& models, unsigned jobs) {
  const std::size_t ns = spec.scenarios.size();
  const std::size_t np = spec.pipelines.size();
  const std::size_t nw = spec.omegas.size();
  const std::size_t nr = spec.ranges.size();
  const std::size_t nseed = spec.seeds.size();
  const std::size_t total = ns * np * nw * nr * nseed;

  SweepResult result;
  result.rows.resize(total);
  std::vector<std::exception_ptr> errors(total);

  parallel_for(total, jobs, [&](std::size_t job) {
    std::size_t rest = job;
    const auto is = rest % nseed;
    rest /= nseed;
    const auto ir = rest % nr;
    rest /= nr;
    const auto iw = rest % nw;
    rest /= nw;
    const auto ip = rest % np;
    const auto isc = rest / np;

    try {
      const auto cfg = sweep_config(base, spec.alpha_rule, spec.omegas[iw], spec.ranges[ir]);
      const auto& scenario = spec.scenarios[isc];
      const auto report =
          run_scenario(cfg, scenario, spec.pipelines[ip], spec.seeds[is], models);
      result.rows[job] = {scenario.name,         spec.pipelines[ip], cfg.opening_omega,
                          cfg.range_r,           cfg.rotation_alpha, spec.seeds[is],
                          report.time_average,   report.steps_counted,
                          report.flag_zero_gt};
    } catch (...) {
      errors[job] = std::current_exception();
    }
  });

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.aggregate = aggregate(result.rows);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows) {
  using Key = std::tuple<std::string, int, double, double, double>;
  std::map<Key, std::size_t> slot;
  std::vector<AggregateRow> out;
  std::vector<std::vector<double>> values;

  for (const auto& r : rows) {
    const Key key{r.scenario, static_cast<int>(r.pipeline), r.omega, r.range, r.alpha};
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({r.scenario, r.pipeline, r.omega, r.range, r.alpha, 0, 0.0, 0.0});
      values.emplace_back();
    }
    values[it->second].push_back(r.time_average);
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = values[i];
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[i].runs = static_cast<int>(v.size());
    out[i].mean = mean;
    out[i].stddev = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return out;
}

}  // namespace roadside::experiments
