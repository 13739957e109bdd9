#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::app {

struct SourceEntry {
  double x = 0.0, y = 0.0, z = 0.0;
  double activity = 2e9;  // Bq
  friend bool operator==(const SourceEntry&, const SourceEntry&) = default;
};

struct AgentEntry {
  double x = 0.0, y = 0.0;
  double yaw = 0.0;
  friend bool operator==(const AgentEntry&, const AgentEntry&) = default;
};

/// Everything a mission needs. Parsed from flat `section.key = value` text;
/// see docs/config_keys.md for the full key list.
struct MissionConfig {
  // grid
  double origin_x = 0.0, origin_y = 0.0, origin_z = 0.0;
  double extent_x = 0.0, extent_y = 0.0;
  double resolution = 0.0;
  // sources and agents
  std::vector<SourceEntry> sources;
  std::vector<AgentEntry> agents;
  double max_speed = 8.0;
  double speed = 8.0;
  double flight_height = 2.0;
  // physics
  double mu = 0.01;
  double kappa = 0.194;
  std::string table = "builtin";  // builtin | file
  std::string table_file;
  std::int64_t table_nphi = 36;
  std::int64_t table_ntheta = 18;
  std::int64_t table_samples = 4096;
  std::uint64_t table_seed = 20240611;
  // recon
  double recon_sigma = 0.17;
  std::int64_t n_iter = 10;
  double eps_t = 1e-3;
  double band = 3.0;
  bool warm_start = false;
  // noise
  double noise_sigma = 0.17;
  double p_ambiguous = 0.13;
  double background_rate = 0.25;
  double beta_min = 0.17;
  double beta_max = 1.40;
  // strategy
  std::string s_min_mode = "auto";  // auto | fixed
  double s_min = 0.0;               // used when fixed
  double s_max_factor = 100.0;
  std::int64_t k_explore = 12;
  double replan_period = 10.0;
  double recent_radius = 3.0;
  double recent_window = 30.0;
  std::int64_t max_exploitation = 30;
  double zigzag_step = 2.0;
  double pass_lateral = 3.0;
  double pass_length = 20.0;
  // run
  double dt = 0.25;
  double duration = 400.0;
  std::uint64_t seed = 1;
  std::string strategy = "active";  // active | zigzag
  std::string output_dir = "out";
  double localize_tolerance = 2.0;
  bool debug_plans = false;

  /// Throws ConfigError naming the offending key and constraint.
  void validate() const;

  friend bool operator==(const MissionConfig&, const MissionConfig&) = default;
};

/// Parses and validates. Unknown or duplicate keys and malformed values are
/// ConfigErrors carrying the key and line. Required: grid.extent_x,
/// grid.extent_y, grid.resolution. With no agent.N entries, agents.count
/// agents are spread along the lower edge of the area.
MissionConfig parse_config(std::istream& is);
MissionConfig load_config(const std::string& path);

/// Every key, explicitly, in a form parse_config reads back to an equal
/// configuration.
std::string serialize_config(const MissionConfig& config);

/// All accepted keys (indexed ones shown with N).
std::vector<std::string> config_keys();

}  // namespace cone_mapper::app
