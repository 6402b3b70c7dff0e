/**
 * @file experiments.hpp
 * @brief Simulation time loop, completeness bookkeeping and (r, omega) sweeps.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roadside/coverage.hpp"
#include "roadside/geometry.hpp"
#include "roadside/perception.hpp"
#include "roadside/tracking.hpp"
#include "roadside/traffic.hpp"

namespace roadside::experiments {

using geometry::SensorFieldConfig;
using traffic::ScenarioConfig;

enum class Pipeline { Vision, Radar, RadarTracking };

std::string_view pipeline_name(Pipeline p);
std::optional<Pipeline> parse_pipeline(std::string_view name);

/// Thrown when a run cannot reach its traversal target within the scenario duration.
class ScenarioTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  double time{0.0};
  int ground_truth{0};
  int detected{0};  ///< |detected ∩ ground truth|
};

struct CompletenessReport {
  std::string scenario;
  Pipeline pipeline{Pipeline::Vision};
  std::uint64_t seed{0};
  std::vector<StepRecord> per_step;
  double time_average{1.0};
  int steps_counted{0};
  bool flag_zero_gt{false};  ///< no step had a non-empty ground truth; time_average is vacuous
  std::uint64_t traversed{0};
  double simulated_time{0.0};
};

/// Sensor and tracker models shared by every run of a sweep.
struct ModelOptions {
  perception::LosModel los{};
  bool radar_noise{true};
  bool radar_false_alarms{true};
  double false_alarm_rate{1e-6};
  tracking::TrackerParams tracker{};
};

/// Mean of the per-step ratios over steps with a non-empty ground truth.
void finalize(CompletenessReport& report);

/**
 * @brief Runs one scenario for one pipeline until target_vehicle_count
 *        vehicles have left the evaluation region (or, for a target of 0,
 *        for the full duration).
 *
 * Traffic advances at the finer of the two sample times when the coarser one
 * is an integer multiple of it, so every pipeline of a seed sees the same
 * vehicles; otherwise each pipeline steps at its own sample time.
 *
 * @throws ScenarioTimeout if the duration elapses first or no lane can ever
 *         deliver a vehicle.
 */
CompletenessReport run_scenario(const SensorFieldConfig& cfg, const ScenarioConfig& scenario,
                                Pipeline pipeline, std::uint64_t seed,
                                const ModelOptions& models = {});

struct SweepSpec {
  std::vector<double> ranges;
  std::vector<double> omegas;
  coverage::AlphaRule alpha_rule{coverage::AlphaRule::MaxRotation};
  std::vector<ScenarioConfig> scenarios;
  std::vector<Pipeline> pipelines;
  std::vector<std::uint64_t> seeds;
};

/// Empty when every sweep axis is non-empty; otherwise one message per empty axis.
std::vector<geometry::Violation> check(const SweepSpec& spec);

struct SweepRow {
  std::string scenario;
  Pipeline pipeline{Pipeline::Vision};
  double omega{0.0};
  double range{0.0};
  double alpha{0.0};
  std::uint64_t seed{0};
  double time_average{1.0};
  int steps_counted{0};
  bool flag_zero_gt{false};
};

struct AggregateRow {
  std::string scenario;
  Pipeline pipeline{Pipeline::Vision};
  double omega{0.0};
  double range{0.0};
  double alpha{0.0};
  int runs{0};
  double mean{0.0};
  double stddev{0.0};  ///< sample standard deviation, 0 for a single run
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< ordered by (scenario, pipeline, omega, r, seed), seed fastest
  std::vector<AggregateRow> aggregate;
};

/// Sensor configuration of one sweep cell.
SensorFieldConfig sweep_config(const SensorFieldConfig& base, coverage::AlphaRule rule,
                               double omega, double range);

/// Runs every sweep cell on up to @p jobs threads; output order does not
/// depend on @p jobs. The first ScenarioTimeout is rethrown after all workers stop.
SweepResult sweep(const SweepSpec& spec, const SensorFieldConfig& base,
                  const ModelOptions& models = {}, unsigned jobs = 1);

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows);

}  // namespace roadside::experiments
