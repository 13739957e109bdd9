#include "cone_mapper/app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/text.hpp"

namespace cone_mapper::app {

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& what,
                            std::size_t line = 0) {
  std::string msg = "config key '" + key + "': " + what;
  if (line > 0) msg += " (line " + std::to_string(line) + ")";
  throw ConfigError(msg);
}

double as_double(const std::string& key, std::string_view v, std::size_t line) {
  const auto d = parse_double(v);
  if (!d || !std::isfinite(*d)) key_error(key, "expected a finite number, got '" + std::string(v) + "'", line);
  return *d;
}

std::int64_t as_int(const std::string& key, std::string_view v, std::size_t line) {
  const auto i = parse_int(v);
  if (!i) key_error(key, "expected an integer, got '" + std::string(v) + "'", line);
  return *i;
}

std::uint64_t as_uint(const std::string& key, std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) {
    key_error(key, "expected a non-negative integer, got '" + std::string(v) + "'", line);
  }
  return out;
}

bool as_bool(const std::string& key, std::string_view v, std::size_t line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  key_error(key, "expected true or false, got '" + std::string(v) + "'", line);
}

struct Field {
  std::function<void(MissionConfig&, const std::string&, std::string_view, std::size_t)> set;
  std::function<std::string(const MissionConfig&)> get;
};

template <class T>
Field field(T MissionConfig::*m) {
  Field f;
  f.set = [m](MissionConfig& c, const std::string& k, std::string_view v, std::size_t line) {
    if constexpr (std::is_same_v<T, double>) {
      c.*m = as_double(k, v, line);
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      c.*m = as_int(k, v, line);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      c.*m = as_uint(k, v, line);
    } else if constexpr (std::is_same_v<T, bool>) {
      c.*m = as_bool(k, v, line);
    } else {
      c.*m = std::string(v);
    }
  };
  f.get = [m](const MissionConfig& c) -> std::string {
    if constexpr (std::is_same_v<T, double>) {
      return format_double(c.*m);
    } else if constexpr (std::is_same_v<T, bool>) {
      return c.*m ? "true" : "false";
    } else if constexpr (std::is_same_v<T, std::string>) {
      return c.*m;
    } else {
      return std::to_string(c.*m);
    }
  };
  return f;
}

// Ordered: serialization follows this order.
const std::vector<std::pair<std::string, Field>>& scalar_fields() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"grid.origin_x", field(&MissionConfig::origin_x)},
      {"grid.origin_y", field(&MissionConfig::origin_y)},
      {"grid.origin_z", field(&MissionConfig::origin_z)},
      {"grid.extent_x", field(&MissionConfig::extent_x)},
      {"grid.extent_y", field(&MissionConfig::extent_y)},
      {"grid.resolution", field(&MissionConfig::resolution)},
      {"agents.max_speed", field(&MissionConfig::max_speed)},
      {"agents.speed", field(&MissionConfig::speed)},
      {"agents.flight_height", field(&MissionConfig::flight_height)},
      {"physics.mu", field(&MissionConfig::mu)},
      {"physics.kappa", field(&MissionConfig::kappa)},
      {"physics.table", field(&MissionConfig::table)},
      {"physics.table_file", field(&MissionConfig::table_file)},
      {"physics.table_nphi", field(&MissionConfig::table_nphi)},
      {"physics.table_ntheta", field(&MissionConfig::table_ntheta)},
      {"physics.table_samples", field(&MissionConfig::table_samples)},
      {"physics.table_seed", field(&MissionConfig::table_seed)},
      {"recon.sigma", field(&MissionConfig::recon_sigma)},
      {"recon.n_iter", field(&MissionConfig::n_iter)},
      {"recon.eps_t", field(&MissionConfig::eps_t)},
      {"recon.band", field(&MissionConfig::band)},
      {"recon.warm_start", field(&MissionConfig::warm_start)},
      {"noise.sigma", field(&MissionConfig::noise_sigma)},
      {"noise.p_ambiguous", field(&MissionConfig::p_ambiguous)},
      {"noise.background_rate", field(&MissionConfig::background_rate)},
      {"noise.beta_min", field(&MissionConfig::beta_min)},
      {"noise.beta_max", field(&MissionConfig::beta_max)},
      {"strategy.s_min_mode", field(&MissionConfig::s_min_mode)},
      {"strategy.s_min", field(&MissionConfig::s_min)},
      {"strategy.s_max_factor", field(&MissionConfig::s_max_factor)},
      {"strategy.k_explore", field(&MissionConfig::k_explore)},
      {"strategy.replan_period", field(&MissionConfig::replan_period)},
      {"strategy.recent_radius", field(&MissionConfig::recent_radius)},
      {"strategy.recent_window", field(&MissionConfig::recent_window)},
      {"strategy.max_exploitation", field(&MissionConfig::max_exploitation)},
      {"strategy.zigzag_step", field(&MissionConfig::zigzag_step)},
      {"strategy.pass_lateral", field(&MissionConfig::pass_lateral)},
      {"strategy.pass_length", field(&MissionConfig::pass_length)},
      {"run.dt", field(&MissionConfig::dt)},
      {"run.duration", field(&MissionConfig::duration)},
      {"run.seed", field(&MissionConfig::seed)},
      {"run.strategy", field(&MissionConfig::strategy)},
      {"run.output_dir", field(&MissionConfig::output_dir)},
      {"run.localize_tolerance", field(&MissionConfig::localize_tolerance)},
      {"run.debug_plans", field(&MissionConfig::debug_plans)},
  };
  return fields;
}

const Field* find_scalar(const std::string& key) {
  for (const auto& [k, f] : scalar_fields()) {
    if (k == key) return &f;
  }
  return nullptr;
}

void require(bool ok, const char* key, const char* constraint) {
  if (!ok) key_error(key, constraint);
}

}  // namespace

void MissionConfig::validate() const {
  require(resolution > 0.0, "grid.resolution", "must be > 0");
  require(extent_x > 0.0, "grid.extent_x", "must be > 0");
  require(extent_y > 0.0, "grid.extent_y", "must be > 0");
  if (resolution > 0.0) {
    const double cells = std::ceil(extent_x / resolution) * std::ceil(extent_y / resolution);
    require(cells <= 4e6, "grid.resolution", "grid would exceed 4e6 cells");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!(sources[i].activity > 0.0)) {
      key_error("source." + std::to_string(i + 1) + ".activity", "must be > 0");
    }
  }
  require(!agents.empty(), "agents.count", "must be >= 1");
  require(max_speed > 0.0, "agents.max_speed", "must be > 0");
  require(speed > 0.0, "agents.speed", "must be > 0");
  require(flight_height >= 0.0, "agents.flight_height", "must be >= 0");
  require(mu >= 0.0, "physics.mu", "must be >= 0");
  require(kappa > 0.0, "physics.kappa", "must be > 0");
  require(table == "builtin" || table == "file", "physics.table", "must be 'builtin' or 'file'");
  require(table != "file" || !table_file.empty(), "physics.table_file",
          "required when physics.table = file");
  require(table_nphi >= 1 && table_nphi <= 100000, "physics.table_nphi", "must be in [1, 100000]");
  require(table_ntheta >= 1 && table_ntheta <= 100000, "physics.table_ntheta",
          "must be in [1, 100000]");
  require(table_samples >= 1, "physics.table_samples", "must be >= 1");
  require(recon_sigma > 0.0, "recon.sigma", "must be > 0");
  require(n_iter >= 1, "recon.n_iter", "must be >= 1");
  require(eps_t >= 0.0 && eps_t < 1.0, "recon.eps_t", "must be in [0, 1)");
  require(band >= 0.0, "recon.band", "must be >= 0 (0 disables)");
  require(noise_sigma >= 0.0, "noise.sigma", "must be >= 0");
  require(p_ambiguous >= 0.0 && p_ambiguous <= 1.0, "noise.p_ambiguous", "must be in [0, 1]");
  require(background_rate >= 0.0, "noise.background_rate", "must be >= 0");
  require(beta_min > 0.0, "noise.beta_min", "must be > 0");
  require(beta_max >= beta_min && beta_max < 3.141592653589793, "noise.beta_max",
          "must be in [noise.beta_min, pi)");
  require(s_min_mode == "auto" || s_min_mode == "fixed", "strategy.s_min_mode",
          "must be 'auto' or 'fixed'");
  require(s_min_mode != "fixed" || s_min > 0.0, "strategy.s_min",
          "must be > 0 when strategy.s_min_mode = fixed");
  require(s_max_factor >= 1.0, "strategy.s_max_factor", "must be >= 1");
  require(k_explore >= 1, "strategy.k_explore", "must be >= 1");
  require(replan_period > 0.0, "strategy.replan_period", "must be > 0");
  require(recent_radius >= 0.0, "strategy.recent_radius", "must be >= 0");
  require(recent_window >= 0.0, "strategy.recent_window", "must be >= 0");
  require(max_exploitation >= 0, "strategy.max_exploitation", "must be >= 0 (0 = no cap)");
  require(zigzag_step > 0.0, "strategy.zigzag_step", "must be > 0");
  require(pass_lateral >= 0.0, "strategy.pass_lateral", "must be >= 0");
  require(pass_length > 0.0, "strategy.pass_length", "must be > 0");
  require(dt > 0.0, "run.dt", "must be > 0");
  require(duration >= 0.0, "run.duration", "must be >= 0");
  require(duration / dt <= 1e7, "run.duration", "more than 1e7 steps");
  require(strategy == "active" || strategy == "zigzag", "run.strategy",
          "must be 'active' or 'zigzag'");
  require(!output_dir.empty(), "run.output_dir", "must not be empty");
  require(localize_tolerance > 0.0, "run.localize_tolerance", "must be > 0");
}

MissionConfig parse_config(std::istream& is) {
  MissionConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::map<std::size_t, std::map<std::string, std::pair<std::string, std::size_t>>> src, agt;
  std::optional<std::int64_t> agent_count;
  std::size_t agent_count_line = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!seen.emplace(key, line_no).second) {
      key_error(key, "duplicate (first set on line " + std::to_string(seen[key]) + ")", line_no);
    }
    if (const Field* f = find_scalar(key)) {
      f->set(cfg, key, value, line_no);
      continue;
    }
    if (key == "agents.count") {
      agent_count = as_int(key, value, line_no);
      agent_count_line = line_no;
      continue;
    }
    // Indexed keys: source.N.attr / agent.N.attr
    const auto parts = split(key, '.');
    if (parts.size() == 3 && (parts[0] == "source" || parts[0] == "agent")) {
      const auto idx = parse_int(parts[1]);
      if (!idx || *idx < 1) key_error(key, "index must be an integer >= 1", line_no);
      const std::string attr(parts[2]);
      const bool is_src = parts[0] == "source";
      const bool known = is_src ? (attr == "x" || attr == "y" || attr == "z" || attr == "activity")
                                : (attr == "x" || attr == "y" || attr == "yaw");
      if (!known) key_error(key, "unknown key", line_no);
      (is_src ? src : agt)[static_cast<std::size_t>(*idx)][attr] = {std::string(value), line_no};
      continue;
    }
    key_error(key, "unknown key", line_no);
  }

  for (const char* k : {"grid.extent_x", "grid.extent_y", "grid.resolution"}) {
    if (!seen.contains(k)) key_error(k, "missing required key");
  }

  auto check_contiguous = [](const auto& m, const char* what) {
    std::size_t expect = 1;
    for (const auto& [i, attrs] : m) {
      if (i != expect) {
        key_error(std::string(what) + "." + std::to_string(expect), "indices must run 1, 2, ... without gaps");
      }
      ++expect;
    }
  };
  check_contiguous(src, "source");
  check_contiguous(agt, "agent");

  for (const auto& [i, attrs] : src) {
    const std::string base = "source." + std::to_string(i) + ".";
    SourceEntry s;
    s.z = cfg.origin_z;
    for (const char* req : {"x", "y"}) {
      if (!attrs.contains(req)) key_error(base + req, "missing required key");
    }
    for (const auto& [attr, vl] : attrs) {
      const double v = as_double(base + attr, vl.first, vl.second);
      if (attr == "x") s.x = v;
      else if (attr == "y") s.y = v;
      else if (attr == "z") s.z = v;
      else s.activity = v;
    }
    cfg.sources.push_back(s);
  }

  if (agent_count && *agent_count < 1) key_error("agents.count", "must be >= 1", agent_count_line);
  if (!agt.empty()) {
    if (agent_count && static_cast<std::size_t>(*agent_count) != agt.size()) {
      key_error("agents.count", "does not match the number of agent.N entries", agent_count_line);
    }
    for (const auto& [i, attrs] : agt) {
      const std::string base = "agent." + std::to_string(i) + ".";
      AgentEntry a;
      for (const char* req : {"x", "y"}) {
        if (!attrs.contains(req)) key_error(base + req, "missing required key");
      }
      for (const auto& [attr, vl] : attrs) {
        const double v = as_double(base + attr, vl.first, vl.second);
        if (attr == "x") a.x = v;
        else if (attr == "y") a.y = v;
        else a.yaw = v;
      }
      cfg.agents.push_back(a);
    }
  } else {
    const std::size_t n = agent_count ? static_cast<std::size_t>(*agent_count) : 1;
    for (std::size_t a = 0; a < n; ++a) {
      const double fx = (static_cast<double>(a) + 0.5) / static_cast<double>(n);
      cfg.agents.push_back({cfg.origin_x + fx * cfg.extent_x,
                            cfg.origin_y + std::min(1.0, 0.5 * cfg.extent_y), 0.0});
    }
  }
  cfg.validate();
  return cfg;
}

MissionConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(is);
}

std::string serialize_config(const MissionConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, f] : scalar_fields()) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) os << '\n';
      section = sec;
      if (sec == "agents") {
        os << "agents.count = " << config.agents.size() << '\n';
        for (std::size_t i = 0; i < config.agents.size(); ++i) {
          const auto& a = config.agents[i];
          const std::string b = "agent." + std::to_string(i + 1) + ".";
          os << b << "x = " << format_double(a.x) << '\n'
             << b << "y = " << format_double(a.y) << '\n'
             << b << "yaw = " << format_double(a.yaw) << '\n';
        }
      }
    }
    os << key << " = " << f.get(config) << '\n';
    if (key == "grid.resolution") {
      os << '\n';
      for (std::size_t i = 0; i < config.sources.size(); ++i) {
        const auto& s = config.sources[i];
        const std::string b = "source." + std::to_string(i + 1) + ".";
        os << b << "x = " << format_double(s.x) << '\n'
           << b << "y = " << format_double(s.y) << '\n'
           << b << "z = " << format_double(s.z) << '\n'
           << b << "activity = " << format_double(s.activity) << '\n';
      }
    }
  }
  return os.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : scalar_fields()) keys.push_back(k);
  keys.push_back("agents.count");
  for (const char* a : {"x", "y", "yaw"}) keys.push_back(std::string("agent.N.") + a);
  for (const char* a : {"x", "y", "z", "activity"}) keys.push_back(std::string("source.N.") + a);
  return keys;
}

}  // namespace cone_mapper::app
