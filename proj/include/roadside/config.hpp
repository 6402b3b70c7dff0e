/**
 * @file config.hpp
 * @brief JSON run configuration shared by every subcommand of the tool.
 *
 * Angles are radians unless a key ends in "_deg". Unknown keys are rejected;
 * every problem is reported with the JSON path of the offending field.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roadside/coverage.hpp"
#include "roadside/experiments.hpp"
#include "roadside/geometry.hpp"
#include "roadside/traffic.hpp"

namespace roadside::config {

using geometry::Violation;

struct RunConfig {
  geometry::SensorFieldConfig sensor_field{};
  std::string output{"out"};
  std::vector<std::uint64_t> seeds{1};
  unsigned jobs{1};

  // coverage-map and boundary
  double cell_size{coverage::kDefaultCellSize};
  int n_max{3};
  std::optional<double> mismatch_band;  ///< defaults to one cell diagonal

  // boundary and simulate axes; empty means "the sensor_field value"
  std::vector<double> omegas;
  std::vector<double> ranges;
  coverage::AlphaRule alpha_rule{coverage::AlphaRule::Fixed};

  // simulate
  std::vector<traffic::ScenarioConfig> scenarios;
  std::vector<experiments::Pipeline> pipelines;
  experiments::ModelOptions models{};

  std::vector<double> omega_axis() const;
  std::vector<double> range_axis() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Parses and fully validates a document; throws ConfigError listing every problem.
RunConfig parse(std::string_view json_text);
RunConfig load(const std::filesystem::path& path);

/// Cross-field checks on an assembled config (sensor field, every sweep cell, scenarios).
std::vector<Violation> check(const RunConfig& cfg);

/// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}; throws std::invalid_argument.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace roadside::config
