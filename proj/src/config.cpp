#include "roadside/config.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>

namespace roadside::config {

namespace {

using nlohmann::json;

constexpr double kDegree = geometry::kPi / 180.0;

std::string join_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : fmt::format("{}.{}", parent, key);
}

std::string index_path(const std::string& parent, std::size_t i) {
  return fmt::format("{}[{}]", parent, i);
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<Violation> violations;

  void error(std::string path, std::string message) {
    violations.push_back({std::move(path), std::move(message)});
  }

  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) {
      error(path.empty() ? "<root>" : path, "must be an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) error(join_path(path, key), "unknown key");
    }
    return true;
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      error(path, "must be a number");
      return std::nullopt;
    }
    return j.get<double>();
  }

  std::optional<bool> boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
      error(path, "must be true or false");
      return std::nullopt;
    }
    return j.get<bool>();
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      error(path, "must be a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<std::int64_t> integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      error(path, "must be an integer");
      return std::nullopt;
    }
    return j.get<std::int64_t>();
  }

  std::optional<std::uint64_t> seed(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
      error(path, "must be a non-negative integer");
      return std::nullopt;
    }
    return j.get<std::uint64_t>();
  }

  // Either a list of numbers or {"from", "to", "step"} (inclusive of "to").
  std::optional<std::vector<double>> axis(const json& j, const std::string& path, double scale) {
    std::vector<double> out;
    if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (auto v = number(j[i], index_path(path, i))) out.push_back(*v * scale);
      }
    } else if (j.is_object()) {
      if (!object(j, path, {"from", "to", "step"})) return std::nullopt;
      std::optional<double> from, to, step;
      if (j.contains("from")) from = number(j["from"], join_path(path, "from"));
      else error(join_path(path, "from"), "is required");
      if (j.contains("to")) to = number(j["to"], join_path(path, "to"));
      else error(join_path(path, "to"), "is required");
      if (j.contains("step")) step = number(j["step"], join_path(path, "step"));
      else error(join_path(path, "step"), "is required");
      if (!from || !to || !step) return std::nullopt;
      if (!(*step > 0.0) || *to < *from) {
        error(path, "needs step > 0 and to >= from");
        return std::nullopt;
      }
      const auto count = static_cast<long>(std::floor((*to - *from) / *step + 1e-9));
      for (long k = 0; k <= count; ++k) out.push_back((*from + k * *step) * scale);
    } else {
      error(path, "must be a list of numbers or {from, to, step}");
      return std::nullopt;
    }
    if (out.empty()) {
      error(path, "must not be empty");
      return std::nullopt;
    }
    return out;
  }
};

// Accepts "<key>" in radians or "<key>_deg" in degrees, not both.
std::optional<double> angle(Reader& r, const json& obj, const std::string& path,
                            std::string_view key) {
  const std::string deg_key = fmt::format("{}_deg", key);
  const bool has_rad = obj.contains(std::string(key));
  const bool has_deg = obj.contains(deg_key);
  if (has_rad && has_deg) {
    r.error(join_path(path, key), fmt::format("give either {} or {}, not both", key, deg_key));
    return std::nullopt;
  }
  if (has_rad) return r.number(obj[std::string(key)], join_path(path, key));
  if (has_deg) {
    if (auto v = r.number(obj[deg_key], join_path(path, deg_key))) return *v * kDegree;
  }
  return std::nullopt;
}

struct SensorFieldInput {
  geometry::SensorFieldConfig cfg;
  bool alpha_is_max{false};
};

SensorFieldInput read_sensor_field(Reader& r, const json& j, const std::string& path) {
  SensorFieldInput in;
  if (!r.object(j, path,
                {"range_r", "opening_omega", "opening_omega_deg", "rotation_alpha",
                 "rotation_alpha_deg", "sensor_to_road_dsr", "sensor_spacing_dpyl",
                 "road_width_droad"})) {
    return in;
  }
  auto required = [&](std::string_view key, double& out) {
    if (!j.contains(std::string(key))) {
      r.error(join_path(path, key), "is required");
      return;
    }
    if (auto v = r.number(j[std::string(key)], join_path(path, key))) out = *v;
  };
  required("range_r", in.cfg.range_r);
  required("sensor_to_road_dsr", in.cfg.sensor_to_road_dsr);
  required("sensor_spacing_dpyl", in.cfg.sensor_spacing_dpyl);
  required("road_width_droad", in.cfg.road_width_droad);

  if (auto w = angle(r, j, path, "opening_omega")) {
    in.cfg.opening_omega = *w;
  } else if (!j.contains("opening_omega") && !j.contains("opening_omega_deg")) {
    r.error(join_path(path, "opening_omega"), "is required");
  }

  if (j.contains("rotation_alpha") && j["rotation_alpha"].is_string()) {
    if (j["rotation_alpha"] == "max" && !j.contains("rotation_alpha_deg")) {
      in.alpha_is_max = true;
    } else {
      r.error(join_path(path, "rotation_alpha"), "must be a number or \"max\"");
    }
  } else if (auto a = angle(r, j, path, "rotation_alpha")) {
    in.cfg.rotation_alpha = *a;
  }
  if (in.alpha_is_max) in.cfg.rotation_alpha = geometry::max_rotation(in.cfg.opening_omega);
  return in;
}

std::optional<traffic::SpawnMode> parse_spawn(std::string_view s) {
  if (s == "arrivals") return traffic::SpawnMode::Arrivals;
  if (s == "gap_sampling") return traffic::SpawnMode::GapSampling;
  return std::nullopt;
}

traffic::ClassMix read_class_mix(Reader& r, const json& j, const std::string& path) {
  traffic::ClassMix mix{0.0, 0.0, 0.0, 0.0, 0.0};
  if (!j.is_object()) {
    r.error(path, "must be an object mapping class names to probabilities");
    return mix;
  }
  for (const auto& [key, value] : j.items()) {
    const auto kind = traffic::parse_class(key);
    if (!kind) {
      r.error(join_path(path, key), "unknown vehicle class");
      continue;
    }
    if (auto v = r.number(value, join_path(path, key))) mix[static_cast<std::size_t>(*kind)] = *v;
  }
  return mix;
}

traffic::LaneSpec read_lane(Reader& r, const json& j, const std::string& path, int index,
                            const traffic::LaneSpec& base) {
  traffic::LaneSpec lane = base;
  lane.index = index;
  if (!r.object(j, path, {"center_y", "flow", "speed", "class_mix", "open", "spawn", "mean_gap"})) {
    return lane;
  }
  if (j.contains("center_y")) {
    if (auto v = r.number(j["center_y"], join_path(path, "center_y"))) lane.center_y = *v;
  }
  if (j.contains("flow")) {
    if (auto v = r.number(j["flow"], join_path(path, "flow"))) lane.flow = *v;
  }
  if (j.contains("speed")) {
    if (auto v = r.number(j["speed"], join_path(path, "speed"))) lane.speed = *v;
  }
  if (j.contains("class_mix")) lane.class_mix = read_class_mix(r, j["class_mix"], join_path(path, "class_mix"));
  if (j.contains("open")) {
    if (auto v = r.boolean(j["open"], join_path(path, "open"))) lane.open = *v;
  }
  if (j.contains("spawn")) {
    if (auto s = r.string(j["spawn"], join_path(path, "spawn"))) {
      if (auto m = parse_spawn(*s)) lane.spawn = *m;
      else r.error(join_path(path, "spawn"), "must be \"arrivals\" or \"gap_sampling\"");
    }
  }
  if (j.contains("mean_gap")) {
    if (auto v = r.number(j["mean_gap"], join_path(path, "mean_gap"))) lane.mean_gap = *v;
  }
  return lane;
}

std::optional<traffic::ScenarioConfig> read_scenario(Reader& r, const json& j,
                                                     const std::string& path,
                                                     const geometry::SensorFieldConfig& road) {
  if (j.is_string()) {
    auto s = traffic::builtin_scenario(j.get<std::string>(), road);
    if (!s) {
      r.error(path, fmt::format("unknown scenario '{}' (built-in: christmas_eve, "
                                "tuesday_morning, traffic_jam)",
                                j.get<std::string>()));
    }
    return s;
  }
  if (!r.object(j, path,
                {"name", "base", "lanes", "vehicle_classes", "segment_length", "eval_region",
                 "duration", "dt_radar", "dt_vision", "target_vehicle_count"})) {
    return std::nullopt;
  }

  traffic::ScenarioConfig s;
  if (j.contains("base")) {
    if (auto b = r.string(j["base"], join_path(path, "base"))) {
      if (auto builtin = traffic::builtin_scenario(*b, road)) s = *builtin;
      else r.error(join_path(path, "base"), fmt::format("unknown scenario '{}'", *b));
    }
  }
  if (j.contains("name")) {
    if (auto v = r.string(j["name"], join_path(path, "name"))) s.name = *v;
  } else if (s.name.empty()) {
    r.error(join_path(path, "name"), "is required");
  }

  auto set = [&](std::string_view key, double& out) {
    if (j.contains(std::string(key))) {
      if (auto v = r.number(j[std::string(key)], join_path(path, key))) out = *v;
    }
  };
  set("segment_length", s.segment_length);
  set("duration", s.duration);
  set("dt_radar", s.dt_radar);
  set("dt_vision", s.dt_vision);
  if (j.contains("target_vehicle_count")) {
    if (auto v = r.integer(j["target_vehicle_count"], join_path(path, "target_vehicle_count"))) {
      s.target_vehicle_count = static_cast<int>(*v);
    }
  }
  if (j.contains("eval_region")) {
    const auto& e = j["eval_region"];
    const auto epath = join_path(path, "eval_region");
    if (e.is_array() && e.size() == 2) {
      auto lo = r.number(e[0], index_path(epath, 0));
      auto hi = r.number(e[1], index_path(epath, 1));
      if (lo && hi) s.eval_region = {*lo, *hi};
    } else {
      r.error(epath, "must be [lo, hi]");
    }
  }
  if (j.contains("vehicle_classes")) {
    const auto& c = j["vehicle_classes"];
    const auto cpath = join_path(path, "vehicle_classes");
    if (!c.is_object()) {
      r.error(cpath, "must be an object keyed by class name");
    } else {
      for (const auto& [key, value] : c.items()) {
        const auto kind = traffic::parse_class(key);
        const auto kpath = join_path(cpath, key);
        if (!kind) {
          r.error(kpath, "unknown vehicle class");
          continue;
        }
        if (!r.object(value, kpath, {"length", "width"})) continue;
        auto& cls = s.classes[static_cast<std::size_t>(*kind)];
        if (value.contains("length")) {
          if (auto v = r.number(value["length"], join_path(kpath, "length"))) cls.length = *v;
        }
        if (value.contains("width")) {
          if (auto v = r.number(value["width"], join_path(kpath, "width"))) cls.width = *v;
        }
      }
    }
  }
  if (j.contains("lanes")) {
    const auto& lanes = j["lanes"];
    const auto lpath = join_path(path, "lanes");
    if (!lanes.is_array()) {
      r.error(lpath, "must be a list of lanes");
    } else {
      // With a base scenario, lane entries override the base lanes index by index.
      std::vector<traffic::LaneSpec> out;
      for (std::size_t i = 0; i < lanes.size(); ++i) {
        const traffic::LaneSpec base = i < s.lanes.size() ? s.lanes[i] : traffic::LaneSpec{};
        out.push_back(read_lane(r, lanes[i], index_path(lpath, i), static_cast<int>(i), base));
      }
      s.lanes = std::move(out);
    }
  }
  return s;
}

void read_models(Reader& r, const json& j, const std::string& path,
                 experiments::ModelOptions& models) {
  if (!r.object(j, path, {"los_cell_size", "radar", "tracker"})) return;
  if (j.contains("los_cell_size")) {
    if (auto v = r.number(j["los_cell_size"], join_path(path, "los_cell_size"))) {
      models.los.cell_size = *v;
    }
  }
  if (j.contains("radar")) {
    const auto& rj = j["radar"];
    const auto rpath = join_path(path, "radar");
    if (r.object(rj, rpath, {"noise", "false_alarms", "false_alarm_rate"})) {
      if (rj.contains("noise")) {
        if (auto v = r.boolean(rj["noise"], join_path(rpath, "noise"))) models.radar_noise = *v;
      }
      if (rj.contains("false_alarms")) {
        if (auto v = r.boolean(rj["false_alarms"], join_path(rpath, "false_alarms"))) {
          models.radar_false_alarms = *v;
        }
      }
      if (rj.contains("false_alarm_rate")) {
        if (auto v = r.number(rj["false_alarm_rate"], join_path(rpath, "false_alarm_rate"))) {
          models.false_alarm_rate = *v;
        }
      }
    }
  }
  if (j.contains("tracker")) {
    const auto& tj = j["tracker"];
    const auto tpath = join_path(path, "tracker");
    auto& t = models.tracker;
    if (r.object(tj, tpath,
                 {"linkage", "confirm_hits", "confirm_window", "coast_limit", "accel_sigma",
                  "gate", "init_speed_sigma", "strict_id_credit"})) {
      auto num = [&](std::string_view key, double& out) {
        if (tj.contains(std::string(key))) {
          if (auto v = r.number(tj[std::string(key)], join_path(tpath, key))) out = *v;
        }
      };
      auto integer = [&](std::string_view key, int& out) {
        if (tj.contains(std::string(key))) {
          if (auto v = r.integer(tj[std::string(key)], join_path(tpath, key))) {
            out = static_cast<int>(*v);
          }
        }
      };
      num("linkage", t.linkage);
      integer("confirm_hits", t.confirm_hits);
      integer("confirm_window", t.confirm_window);
      integer("coast_limit", t.coast_limit);
      num("accel_sigma", t.accel_sigma);
      num("gate", t.gate);
      num("init_speed_sigma", t.init_speed_sigma);
      if (tj.contains("strict_id_credit")) {
        if (auto v = r.boolean(tj["strict_id_credit"], join_path(tpath, "strict_id_credit"))) {
          t.strict_id_credit = *v;
        }
      }
    }
  }
}

std::string describe(const std::vector<Violation>& violations) {
  std::string out = "invalid configuration:";
  for (const auto& v : violations) out += fmt::format("\n  {}: {}", v.field, v.message);
  return out;
}

std::vector<Violation> prefixed(std::vector<Violation> in, const std::string& prefix) {
  for (auto& v : in) v.field = join_path(prefix, v.field);
  return in;
}

}  // namespace

ConfigError::ConfigError(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

std::vector<double> RunConfig::omega_axis() const {
  return omegas.empty() ? std::vector<double>{sensor_field.opening_omega} : omegas;
}

std::vector<double> RunConfig::range_axis() const {
  return ranges.empty() ? std::vector<double>{sensor_field.range_r} : ranges;
}

RunConfig parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<Violation>{{"<document>", e.what()}});
  }

  Reader r;
  RunConfig cfg;
  if (!r.object(doc, "",
                {"sensor_field", "output", "seeds", "jobs", "grid", "sweep", "scenarios",
                 "pipelines", "models"})) {
    throw ConfigError(std::move(r.violations));
  }

  if (doc.contains("sensor_field")) {
    const auto in = read_sensor_field(r, doc["sensor_field"], "sensor_field");
    cfg.sensor_field = in.cfg;
    if (in.alpha_is_max) cfg.alpha_rule = coverage::AlphaRule::MaxRotation;
  } else {
    r.error("sensor_field", "is required");
  }

  if (doc.contains("output")) {
    if (auto v = r.string(doc["output"], "output")) cfg.output = *v;
  }
  if (doc.contains("seeds")) {
    const auto& s = doc["seeds"];
    if (!s.is_array() || s.empty()) {
      r.error("seeds", "must be a non-empty list of integers");
    } else {
      cfg.seeds.clear();
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (auto v = r.seed(s[i], index_path("seeds", i))) cfg.seeds.push_back(*v);
      }
    }
  }
  if (doc.contains("jobs")) {
    if (auto v = r.integer(doc["jobs"], "jobs")) {
      if (*v < 1) r.error("jobs", "must be >= 1");
      else cfg.jobs = static_cast<unsigned>(*v);
    }
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (r.object(g, "grid", {"cell_size", "n_max", "mismatch_band"})) {
      if (g.contains("cell_size")) {
        if (auto v = r.number(g["cell_size"], "grid.cell_size")) cfg.cell_size = *v;
      }
      if (g.contains("n_max")) {
        if (auto v = r.integer(g["n_max"], "grid.n_max")) cfg.n_max = static_cast<int>(*v);
      }
      if (g.contains("mismatch_band")) {
        if (auto v = r.number(g["mismatch_band"], "grid.mismatch_band")) cfg.mismatch_band = *v;
      }
    }
  }

  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    if (r.object(s, "sweep", {"omegas", "omegas_deg", "ranges", "alpha_rule"})) {
      if (s.contains("omegas") && s.contains("omegas_deg")) {
        r.error("sweep.omegas", "give either omegas or omegas_deg, not both");
      } else if (s.contains("omegas")) {
        if (auto a = r.axis(s["omegas"], "sweep.omegas", 1.0)) cfg.omegas = *a;
      } else if (s.contains("omegas_deg")) {
        if (auto a = r.axis(s["omegas_deg"], "sweep.omegas_deg", kDegree)) cfg.omegas = *a;
      }
      if (s.contains("ranges")) {
        if (auto a = r.axis(s["ranges"], "sweep.ranges", 1.0)) cfg.ranges = *a;
      }
      if (s.contains("alpha_rule")) {
        if (auto v = r.string(s["alpha_rule"], "sweep.alpha_rule")) {
          if (*v == "fixed") cfg.alpha_rule = coverage::AlphaRule::Fixed;
          else if (*v == "max_rotation") cfg.alpha_rule = coverage::AlphaRule::MaxRotation;
          else r.error("sweep.alpha_rule", "must be \"fixed\" or \"max_rotation\"");
        }
      }
    }
  }

  if (doc.contains("scenarios")) {
    const auto& s = doc["scenarios"];
    if (!s.is_array()) {
      r.error("scenarios", "must be a list of scenario names or objects");
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (auto sc = read_scenario(r, s[i], index_path("scenarios", i), cfg.sensor_field)) {
          cfg.scenarios.push_back(std::move(*sc));
        }
      }
    }
  }

  if (doc.contains("pipelines")) {
    const auto& p = doc["pipelines"];
    if (!p.is_array()) {
      r.error("pipelines", "must be a list");
    } else {
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto path = index_path("pipelines", i);
        if (auto name = r.string(p[i], path)) {
          if (auto pl = experiments::parse_pipeline(*name)) cfg.pipelines.push_back(*pl);
          else r.error(path, "must be one of vision, radar, radar_tracking");
        }
      }
    }
  }

  if (doc.contains("models")) read_models(r, doc["models"], "models", cfg.models);

  // Invariant checks also run next to parse errors, as long as they do not
  // repeat a field that already failed to parse.
  if (doc.contains("sensor_field") && doc["sensor_field"].is_object()) {
    for (auto& v : check(cfg)) {
      bool seen = false;
      for (const auto& old : r.violations) seen = seen || old.field == v.field;
      if (!seen) r.violations.push_back(std::move(v));
    }
  }
  if (!r.violations.empty()) throw ConfigError(std::move(r.violations));
  return cfg;
}

RunConfig load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::vector<Violation>{{"<file>", fmt::format("cannot read {}", path.string())}});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::vector<Violation> check(const RunConfig& cfg) {
  auto out = prefixed(geometry::check(cfg.sensor_field), "sensor_field");

  if (!(cfg.cell_size > 0.0)) {
    out.push_back({"grid.cell_size", "must be > 0"});
  } else if (cfg.cell_size > cfg.sensor_field.road_width_droad) {
    out.push_back({"grid.cell_size", "must not exceed the road width"});
  }
  if (cfg.n_max < 1) out.push_back({"grid.n_max", "must be >= 1"});
  if (cfg.mismatch_band && !(*cfg.mismatch_band >= 0.0)) {
    out.push_back({"grid.mismatch_band", "must be >= 0"});
  }
  if (cfg.seeds.empty()) out.push_back({"seeds", "must not be empty"});

  // Every sweep cell must itself be a valid sensor field.
  const auto omegas = cfg.omega_axis();
  const auto ranges = cfg.range_axis();
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    auto cell = experiments::sweep_config(cfg.sensor_field, cfg.alpha_rule, omegas[i],
                                          cfg.sensor_field.range_r);
    for (auto& v : geometry::check(cell)) {
      if (v.field == "range_r") continue;
      out.push_back({cfg.omegas.empty() ? join_path("sensor_field", v.field)
                                        : index_path("sweep.omegas", i),
                     v.message});
    }
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (!(ranges[i] >= 0.0) || !std::isfinite(ranges[i])) {
      out.push_back({cfg.ranges.empty() ? std::string("sensor_field.range_r")
                                        : index_path("sweep.ranges", i),
                     "must be a finite range >= 0"});
    }
  }

  for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
    auto v = prefixed(traffic::check(cfg.scenarios[i], cfg.sensor_field),
                      index_path("scenarios", i));
    out.insert(out.end(), v.begin(), v.end());
  }

  const auto& m = cfg.models;
  if (!(m.los.cell_size > 0.0)) out.push_back({"models.los_cell_size", "must be > 0"});
  if (!(m.false_alarm_rate >= 0.0 && m.false_alarm_rate <= 1.0)) {
    out.push_back({"models.radar.false_alarm_rate", "must lie in [0, 1]"});
  }
  const auto& t = m.tracker;
  if (!(t.linkage >= 0.0)) out.push_back({"models.tracker.linkage", "must be >= 0"});
  if (t.confirm_window < 1 || t.confirm_window > 31) {
    out.push_back({"models.tracker.confirm_window", "must lie in [1, 31]"});
  }
  if (t.confirm_hits < 1 || t.confirm_hits > t.confirm_window) {
    out.push_back({"models.tracker.confirm_hits", "must lie in [1, confirm_window]"});
  }
  if (t.coast_limit < 1) out.push_back({"models.tracker.coast_limit", "must be >= 1"});
  if (!(t.accel_sigma >= 0.0)) out.push_back({"models.tracker.accel_sigma", "must be >= 0"});
  if (!(t.gate > 0.0)) out.push_back({"models.tracker.gate", "must be > 0"});
  if (!(t.init_speed_sigma > 0.0)) {
    out.push_back({"models.tracker.init_speed_sigma", "must be > 0"});
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  auto to_u64 = [](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument(fmt::format("'{}' is not a seed", s));
    }
    return v;
  };
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(to_u64(item));
    } else {
      const auto lo = to_u64(item.substr(0, dash));
      const auto hi = to_u64(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument(fmt::format("empty seed range '{}'", item));
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

}  // namespace roadside::config
