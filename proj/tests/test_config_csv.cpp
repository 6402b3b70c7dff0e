#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "roadside/config.hpp"
#include "roadside/csv.hpp"

namespace {

using namespace roadside;

constexpr const char* kField =
    R"("sensor_field": {"range_r": 80, "opening_omega_deg": 60, "rotation_alpha": "max",
        "sensor_to_road_dsr": 0.5, "sensor_spacing_dpyl": 50, "road_width_droad": 14})";

std::vector<std::string> fields_of(const std::string& text) {
  try {
    config::parse(text);
  } catch (const config::ConfigError& e) {
    std::vector<std::string> out;
    for (const auto& v : e.violations()) out.push_back(v.field);
    return out;
  }
  return {};
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

TEST(Csv, FormatNumberRoundTrips) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng) / (1 + i);
    EXPECT_EQ(std::stod(csv::format_number(x)), x);
  }
  EXPECT_EQ(csv::format_number(0.25), "0.25");
  EXPECT_EQ(csv::format_number(50.0), "50");
  EXPECT_EQ(csv::format_bool(true), "1");
}

TEST(Csv, QuotingRoundTrip) {
  csv::Table t;
  t.header = {"name", "note"};
  t.rows = {{"plain", "a,b"}, {"with \"quotes\"", "two\nlines"}, {"", "x"}};
  const auto text = csv::to_string(t);
  EXPECT_NE(text.find("\"a,b\""), std::string::npos);
  EXPECT_NE(text.find("\"with \"\"quotes\"\"\""), std::string::npos);
  const auto back = csv::parse(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(Csv, ParseWithoutTrailingNewlineAndLookups) {
  const auto t = csv::parse("a,b\n1,x\n2.5,y");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_FALSE(t.column("c"));
  EXPECT_DOUBLE_EQ(t.number(1, "a"), 2.5);
  EXPECT_EQ(t.text(0, "b"), "x");
  EXPECT_THROW(t.number(0, "c"), std::out_of_range);
  EXPECT_THROW(t.number(0, "b"), std::invalid_argument);
}

TEST(Csv, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "roadside_csv_test";
  std::filesystem::create_directories(dir);
  csv::Table t;
  t.header = {"x_m", "y_m", "degree"};
  t.rows = {{"0.125", "0.625", "2"}};
  csv::write_file(dir / "t.csv", t);
  const auto back = csv::read_file(dir / "t.csv");
  EXPECT_EQ(back.rows, t.rows);
  std::filesystem::remove_all(dir);
}

TEST(Csv, GridTableLayout) {
  const geometry::SensorFieldConfig cfg{0.0, 1.0, 0.0, 0.5, 50.0, 14.0};
  const auto table = csv::grid_table(coverage::build_grid(cfg, 0.25));
  EXPECT_EQ(table.header, (std::vector<std::string>{"x_m", "y_m", "degree"}));
  EXPECT_EQ(table.rows.size(), 11200u);
  EXPECT_EQ(table.rows[0], (std::vector<std::string>{"0.125", "0.625", "0"}));
}

TEST(Csv, RunAndAggregateTables) {
  experiments::SweepRow row{"jam", experiments::Pipeline::RadarTracking, 1.0, 80.0, 1.0, 7,
                            0.5, 100, false};
  const auto runs = csv::runs_table({row});
  EXPECT_EQ(runs.header.size(), 9u);
  EXPECT_EQ(runs.text(0, "pipeline"), "radar_tracking");
  EXPECT_EQ(runs.text(0, "seed"), "7");
  EXPECT_EQ(runs.text(0, "flag_zero_gt"), "0");
  const auto agg = csv::aggregate_table(experiments::aggregate({row}));
  EXPECT_EQ(agg.text(0, "runs"), "1");
  EXPECT_DOUBLE_EQ(agg.number(0, "mean"), 0.5);
}

TEST(Config, MinimalDocument) {
  const auto cfg = config::parse(std::string("{") + kField + "}");
  EXPECT_DOUBLE_EQ(cfg.sensor_field.range_r, 80.0);
  EXPECT_NEAR(cfg.sensor_field.opening_omega, geometry::kPi / 3, 1e-15);
  EXPECT_NEAR(cfg.sensor_field.rotation_alpha, geometry::kPi / 3, 1e-15);
  EXPECT_EQ(cfg.alpha_rule, coverage::AlphaRule::MaxRotation);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(cfg.output, "out");
  EXPECT_EQ(cfg.omega_axis(), (std::vector<double>{cfg.sensor_field.opening_omega}));
}

TEST(Config, AxesScenariosPipelinesAndModels) {
  const auto cfg = config::parse(std::string("{") + kField + R"(,
    "sweep": {"omegas_deg": {"from": 10, "to": 30, "step": 10}, "ranges": [30, 150],
              "alpha_rule": "fixed"},
    "scenarios": ["traffic_jam", {"base": "tuesday_morning", "name": "short",
                                  "target_vehicle_count": 10, "duration": 100}],
    "pipelines": ["vision", "radar_tracking"],
    "seeds": [3, 4],
    "jobs": 2,
    "models": {"los_cell_size": 0.1, "radar": {"noise": false, "false_alarm_rate": 1e-5},
               "tracker": {"coast_limit": 3, "strict_id_credit": true}}
  })");
  ASSERT_EQ(cfg.omegas.size(), 3u);
  EXPECT_NEAR(cfg.omegas[2], geometry::kPi / 6, 1e-12);
  EXPECT_EQ(cfg.ranges, (std::vector<double>{30.0, 150.0}));
  EXPECT_EQ(cfg.alpha_rule, coverage::AlphaRule::Fixed);
  ASSERT_EQ(cfg.scenarios.size(), 2u);
  EXPECT_EQ(cfg.scenarios[0].name, "traffic_jam");
  EXPECT_EQ(cfg.scenarios[1].name, "short");
  EXPECT_EQ(cfg.scenarios[1].lanes.size(), 4u);
  EXPECT_EQ(cfg.scenarios[1].target_vehicle_count, 10);
  EXPECT_EQ(cfg.pipelines.size(), 2u);
  EXPECT_EQ(cfg.jobs, 2u);
  EXPECT_FALSE(cfg.models.radar_noise);
  EXPECT_DOUBLE_EQ(cfg.models.false_alarm_rate, 1e-5);
  EXPECT_DOUBLE_EQ(cfg.models.los.cell_size, 0.1);
  EXPECT_EQ(cfg.models.tracker.coast_limit, 3);
  EXPECT_TRUE(cfg.models.tracker.strict_id_credit);
}

TEST(Config, UnknownKeysAreNamed) {
  const auto f = fields_of(std::string("{") + kField + R"(, "extra": 1, "grid": {"cells": 2}})");
  EXPECT_TRUE(has(f, "extra"));
  EXPECT_TRUE(has(f, "grid.cells"));
}

TEST(Config, EveryProblemIsReported) {
  const auto f = fields_of(R"({
    "sensor_field": {"range_r": 80, "opening_omega": 4, "rotation_alpha": 0.1,
                     "sensor_to_road_dsr": 0.5, "sensor_spacing_dpyl": 50,
                     "road_width_droad": 14, "extra": 1},
    "scenarios": [{"base": "tuesday_morning", "name": "x",
                   "lanes": [{"class_mix": {"car": 0.9}}]}, "rush_hour"],
    "pipelines": ["lidar"],
    "seeds": []
  })");
  EXPECT_TRUE(has(f, "sensor_field.extra"));
  EXPECT_TRUE(has(f, "sensor_field.opening_omega"));
  EXPECT_TRUE(has(f, "scenarios[0].lanes[0].class_mix"));
  EXPECT_TRUE(has(f, "scenarios[1]"));
  EXPECT_TRUE(has(f, "pipelines[0]"));
  EXPECT_TRUE(has(f, "seeds"));
}

TEST(Config, MissingAndMistypedFields) {
  auto f = fields_of(R"({"sensor_field": {"range_r": "far"}})");
  EXPECT_TRUE(has(f, "sensor_field.range_r"));
  EXPECT_TRUE(has(f, "sensor_field.opening_omega"));
  EXPECT_TRUE(has(f, "sensor_field.sensor_spacing_dpyl"));
  f = fields_of("{}");
  EXPECT_TRUE(has(f, "sensor_field"));
  f = fields_of("{not json");
  EXPECT_TRUE(has(f, "<document>"));
  f = fields_of(std::string("{") + kField + R"(, "sweep": {"ranges": {"from": 5, "to": 1, "step": 1}}})");
  EXPECT_TRUE(has(f, "sweep.ranges"));
}

TEST(Config, BothAngleSpellingsRejected) {
  const auto f = fields_of(R"({"sensor_field": {"range_r": 80, "opening_omega": 1,
      "opening_omega_deg": 60, "rotation_alpha": 0, "sensor_to_road_dsr": 0.5,
      "sensor_spacing_dpyl": 50, "road_width_droad": 14}})");
  EXPECT_TRUE(has(f, "sensor_field.opening_omega"));
}

TEST(Config, SweepCellsAreChecked) {
  const auto f = fields_of(R"({"sensor_field": {"range_r": 80, "opening_omega_deg": 60,
      "rotation_alpha_deg": 50, "sensor_to_road_dsr": 0.5, "sensor_spacing_dpyl": 50,
      "road_width_droad": 14}, "sweep": {"omegas_deg": [60, 100], "alpha_rule": "fixed"}})");
  EXPECT_TRUE(has(f, "sweep.omegas[1]"));
}

TEST(Config, LoadReportsUnreadableFile) {
  EXPECT_THROW(config::load("/nonexistent/roadside.json"), config::ConfigError);
}

TEST(SeedList, RangesAndErrors) {
  EXPECT_EQ(config::parse_seed_list("1,2,5-8"), (std::vector<std::uint64_t>{1, 2, 5, 6, 7, 8}));
  EXPECT_EQ(config::parse_seed_list("42"), (std::vector<std::uint64_t>{42}));
  EXPECT_THROW(config::parse_seed_list(""), std::invalid_argument);
  EXPECT_THROW(config::parse_seed_list("1,,2"), std::invalid_argument);
  EXPECT_THROW(config::parse_seed_list("8-5"), std::invalid_argument);
  EXPECT_THROW(config::parse_seed_list("x"), std::invalid_argument);
  EXPECT_THROW(config::parse_seed_list("-3"), std::invalid_argument);
}

}  // namespace
