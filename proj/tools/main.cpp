// roadside: coverage maps, coverage boundaries and completeness simulations
// for periodic roadside sensor arrays.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <optional>
#include <string>

#include "roadside/config.hpp"
#include "roadside/coverage.hpp"
#include "roadside/csv.hpp"
#include "roadside/experiments.hpp"
#include "roadside/geometry.hpp"

namespace fs = std::filesystem;
using namespace roadside;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> seeds;
  std::optional<unsigned> jobs;
  bool strict_id_credit{false};
};

config::RunConfig load(const Options& opt) {
  auto cfg = config::load(opt.config_path);
  if (opt.out) cfg.output = *opt.out;
  if (opt.jobs) {
    if (*opt.jobs < 1) {
      throw config::ConfigError(std::vector<geometry::Violation>{{"--jobs", "must be >= 1"}});
    }
    cfg.jobs = *opt.jobs;
  }
  if (opt.seeds) {
    try {
      cfg.seeds = config::parse_seed_list(*opt.seeds);
    } catch (const std::invalid_argument& e) {
      throw config::ConfigError(std::vector<geometry::Violation>{{"--seeds", e.what()}});
    }
  }
  if (opt.strict_id_credit) cfg.models.tracker.strict_id_credit = true;
  return cfg;
}

fs::path prepare_output(const config::RunConfig& cfg) {
  fs::path dir(cfg.output);
  fs::create_directories(dir);
  return dir;
}

int cmd_coverage_map(const config::RunConfig& cfg) {
  const auto dir = prepare_output(cfg);
  const auto grid = coverage::build_grid(cfg.sensor_field, cfg.cell_size);
  csv::write_file(dir / "coverage_grid.csv", csv::grid_table(grid));

  csv::Table predicates;
  predicates.header = {"n", "spacing_m", "lower_requirement", "upper_requirement", "covered"};
  for (int n = 1; n <= cfg.n_max; ++n) {
    const double spacing = n * cfg.sensor_field.sensor_spacing_dpyl;
    predicates.rows.push_back(
        {std::to_string(n), csv::format_number(spacing),
         csv::format_bool(geometry::lower_requirement(cfg.sensor_field, spacing)),
         csv::format_bool(geometry::upper_requirement(cfg.sensor_field, spacing)),
         csv::format_bool(geometry::covered_with_degree(cfg.sensor_field, n))});
  }
  csv::write_file(dir / "coverage_predicates.csv", predicates);

  fmt::print("grid {} x {} cells, min degree {}, max degree {}, r_min {} m\n", grid.columns,
             grid.rows, grid.min_degree(), grid.max_degree(),
             geometry::min_range(cfg.sensor_field));
  return kExitOk;
}

int cmd_boundary(const config::RunConfig& cfg) {
  const auto dir = prepare_output(cfg);
  std::vector<coverage::SweepPoint> points;
  for (double w : cfg.omega_axis()) {
    for (double r : cfg.range_axis()) points.push_back({w, r});
  }
  coverage::SweepOptions options;
  options.n_max = cfg.n_max;
  options.cell_size = cfg.cell_size;
  options.alpha_rule = cfg.alpha_rule;
  options.jobs = cfg.jobs;
  const auto rows = coverage::boundary_sweep(points, cfg.sensor_field, options);
  csv::write_file(dir / "boundary.csv", csv::boundary_table(rows, cfg.n_max));

  csv::Table mismatches;
  mismatches.header = {"omega_rad", "r_m", "n", "analytic", "numeric_min_degree",
                       "boundary_distance_m"};
  for (const auto& row : rows) {
    for (int n = 1; n <= cfg.n_max; ++n) {
      const bool analytic = row.analytic[n - 1];
      if (analytic == (row.numeric_min_degree >= n)) continue;
      mismatches.rows.push_back({csv::format_number(row.omega), csv::format_number(row.range),
                                 std::to_string(n), csv::format_bool(analytic),
                                 std::to_string(row.numeric_min_degree),
                                 csv::format_number(row.boundary_distance[n - 1])});
    }
  }
  csv::write_file(dir / "boundary_mismatches.csv", mismatches);

  const double band = cfg.mismatch_band.value_or(cfg.cell_size * std::sqrt(2.0));
  const auto s = coverage::summarize_mismatches(rows, band);
  fmt::print("comparisons {} mismatches {} outside_band {} band_m {} max_mismatch_distance_m {}\n",
             s.comparisons, s.mismatches, s.mismatches_outside_band, s.band,
             s.max_mismatch_boundary_distance);
  return kExitOk;
}

int cmd_simulate(const config::RunConfig& cfg) {
  std::vector<geometry::Violation> missing;
  if (cfg.scenarios.empty()) missing.push_back({"scenarios", "simulate needs at least one"});
  if (cfg.pipelines.empty()) missing.push_back({"pipelines", "simulate needs at least one"});
  if (!missing.empty()) throw config::ConfigError(std::move(missing));

  experiments::SweepSpec spec;
  spec.ranges = cfg.range_axis();
  spec.omegas = cfg.omega_axis();
  spec.alpha_rule = cfg.alpha_rule;
  spec.scenarios = cfg.scenarios;
  spec.pipelines = cfg.pipelines;
  spec.seeds = cfg.seeds;

  const auto result = experiments::sweep(spec, cfg.sensor_field, cfg.models, cfg.jobs);
  const auto dir = prepare_output(cfg);
  csv::write_file(dir / "runs.csv", csv::runs_table(result.rows));
  csv::write_file(dir / "aggregate.csv", csv::aggregate_table(result.aggregate));

  fmt::print("{:<18} {:<15} {:>9} {:>8} {:>5} {:>8} {:>8}\n", "scenario", "pipeline",
             "omega_deg", "r_m", "runs", "mean", "stddev");
  for (const auto& a : result.aggregate) {
    fmt::print("{:<18} {:<15} {:>9.2f} {:>8.2f} {:>5} {:>8.4f} {:>8.4f}\n", a.scenario,
               experiments::pipeline_name(a.pipeline), a.omega * 180.0 / geometry::kPi, a.range,
               a.runs, a.mean, a.stddev);
  }
  return kExitOk;
}

void print_violations(const config::ConfigError& e) {
  for (const auto& v : e.violations()) fmt::print(stderr, "{}: {}\n", v.field, v.message);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and evaluation of periodic roadside sensor arrays"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool sweep_flags) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out, "output directory (overrides \"output\")");
    if (sweep_flags) {
      sub->add_option("--jobs", opt.jobs, "worker threads (overrides \"jobs\")");
    }
  };

  auto* coverage_map = app.add_subcommand("coverage-map", "coverage-degree grid of one period");
  add_common(coverage_map, false);
  auto* boundary = app.add_subcommand("boundary", "analytic vs. numeric coverage over (omega, r)");
  add_common(boundary, true);
  auto* simulate = app.add_subcommand("simulate", "completeness sweep over scenarios and pipelines");
  add_common(simulate, true);
  simulate->add_option("--seeds", opt.seeds, "seed list, e.g. 1,2,5-8 (overrides \"seeds\")");
  simulate->add_flag("--strict-id-credit", opt.strict_id_credit,
                     "credit a track only with the vehicle nearest to it");
  auto* validate = app.add_subcommand("validate", "check a configuration and list every problem");
  validate->add_option("--config", opt.config_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto cfg = load(opt);
    if (*validate) {
      fmt::print("configuration is valid\n");
      return kExitOk;
    }
    if (*coverage_map) return cmd_coverage_map(cfg);
    if (*boundary) return cmd_boundary(cfg);
    if (*simulate) return cmd_simulate(cfg);
  } catch (const config::ConfigError& e) {
    print_violations(e);
    return kExitConfig;
  } catch (const experiments::ScenarioTimeout& e) {
    fmt::print(stderr, "timeout: {}\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
