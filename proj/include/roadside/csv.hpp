/**
 * @file csv.hpp
 * @brief Tidy CSV tables (header row, LF endings, '.' decimals) and the
 *        table layouts emitted by the command-line tool.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadside/coverage.hpp"
#include "roadside/experiments.hpp"

namespace roadside::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  /// Throws std::out_of_range for an unknown column, std::invalid_argument for non-numbers.
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

/// Shortest representation that reads back to the same double.
std::string format_number(double value);
std::string format_bool(bool value);

std::string to_string(const Table& table);
/// RFC 4180 quoting is understood; a trailing newline is optional.
Table parse(std::string_view text);

void write_file(const std::filesystem::path& path, const Table& table);
Table read_file(const std::filesystem::path& path);

/// x_m, y_m, degree: one row per cell center, rows bottom to top.
Table grid_table(const coverage::CoverageGrid& grid);
/// omega_rad, r_m, analytic_n1..analytic_n{n_max}, numeric_min_degree
Table boundary_table(const std::vector<coverage::BoundaryRow>& rows, int n_max);
/// scenario, pipeline, omega_rad, r_m, alpha_rad, seed, time_avg_completeness,
/// steps_counted, flag_zero_gt
Table runs_table(const std::vector<experiments::SweepRow>& rows);
/// scenario, pipeline, omega_rad, r_m, alpha_rad, runs, mean, stddev
Table aggregate_table(const std::vector<experiments::AggregateRow>& rows);

}  // namespace roadside::csv
