#include "roadside/csv.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roadside::csv {

namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    append_field(out, fields[i]);
  }
  out.push_back('\n');
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

const std::string& Table::text(std::size_t row, std::string_view name) const {
  const auto c = column(name);
  if (!c) throw std::out_of_range(fmt::format("no column '{}'", name));
  return rows.at(row).at(*c);
}

double Table::number(std::size_t row, std::string_view name) const {
  const auto& s = text(row, name);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("column '{}' row {}: '{}' is not a number", name,
                                            row, s));
  }
  return value;
}

std::string format_number(double value) { return fmt::format("{}", value); }

std::string format_bool(bool value) { return value ? "1" : "0"; }

std::string to_string(const Table& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& r : table.rows) append_row(out, r);
  return out;
}

Table parse(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  Table table;
  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw std::invalid_argument(fmt::format("line {}: expected {} fields, found {}", i + 1,
                                              table.header.size(), records[i].size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

void write_file(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  out << to_string(table);
  if (!out) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

Table grid_table(const coverage::CoverageGrid& grid) {
  Table t;
  t.header = {"x_m", "y_m", "degree"};
  t.rows.reserve(grid.degrees.size());
  for (std::size_t row = 0; row < grid.rows; ++row) {
    for (std::size_t col = 0; col < grid.columns; ++col) {
      const auto p = grid.center(col, row);
      t.rows.push_back(
          {format_number(p.x), format_number(p.y), std::to_string(grid.at(col, row))});
    }
  }
  return t;
}

Table boundary_table(const std::vector<coverage::BoundaryRow>& rows, int n_max) {
  Table t;
  t.header = {"omega_rad", "r_m"};
  for (int n = 1; n <= n_max; ++n) t.header.push_back(fmt::format("analytic_n{}", n));
  t.header.push_back("numeric_min_degree");
  for (const auto& r : rows) {
    std::vector<std::string> fields{format_number(r.omega), format_number(r.range)};
    for (int n = 1; n <= n_max; ++n) {
      fields.push_back(format_bool(static_cast<std::size_t>(n) <= r.analytic.size() &&
                                   r.analytic[n - 1]));
    }
    fields.push_back(std::to_string(r.numeric_min_degree));
    t.rows.push_back(std::move(fields));
  }
  return t;
}

Table runs_table(const std::vector<experiments::SweepRow>& rows) {
  Table t;
  t.header = {"scenario",  "pipeline", "omega_rad",
              "r_m",       "alpha_rad", "seed",
              "time_avg_completeness", "steps_counted", "flag_zero_gt"};
  for (const auto& r : rows) {
    t.rows.push_back({r.scenario, std::string(experiments::pipeline_name(r.pipeline)),
                      format_number(r.omega), format_number(r.range), format_number(r.alpha),
                      std::to_string(r.seed), format_number(r.time_average),
                      std::to_string(r.steps_counted), format_bool(r.flag_zero_gt)});
  }
  return t;
}

Table aggregate_table(const std::vector<experiments::AggregateRow>& rows) {
  Table t;
  t.header = {"scenario", "pipeline", "omega_rad", "r_m", "alpha_rad", "runs", "mean", "stddev"};
  for (const auto& r : rows) {
    t.rows.push_back({r.scenario, std::string(experiments::pipeline_name(r.pipeline)),
                      format_number(r.omega), format_number(r.range), format_number(r.alpha),
                      std::to_string(r.runs), format_number(r.mean), format_number(r.stddev)});
  }
  return t;
}

}  // namespace roadside::csv
