#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cone_mapper/app/config.hpp"
#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/sim/world.hpp"
#include "cone_mapper/strategy/mission.hpp"

namespace cone_mapper::app {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kMetricsSchema = "cone_mapper/metrics v1";

/// Resolved mission: the config plus everything derived from it (grid, table,
/// thresholds). Building one is the expensive part of a run, so batches
/// reuse it across seeds.
struct PreparedMission {
  MissionConfig config;
  GridMap grid;
  physics::LookupTable table;
  strategy::MissionSettings settings;
  sim::SimParams sim;
  std::vector<sim::SourceSpec> sources;
  std::vector<sim::AgentState> agents;
  double s_min = 0.0;
  double s_max = 0.0;

  /// Fresh simulator for `seed`.
  sim::World make_world(std::uint64_t seed) const;
  strategy::MissionSettings settings_for(std::uint64_t seed, strategy::SearchMode mode) const;
};

physics::LookupTable build_table(const MissionConfig& config);
PreparedMission prepare(const MissionConfig& config);

/// Run header: resolved derived values as comments followed by the full
/// configuration (which parses back to the same MissionConfig).
std::string run_header(const PreparedMission& m, const std::string& mode);

struct MissionReport {
  strategy::MissionOutcome outcome;
  std::string output_dir;
  std::string header;
  std::string cone_log;
  std::string viewpoint_log;
  std::string metrics_csv;
  std::string lambda_dump;
  std::string sensitivity_dump;
  std::string summary;
  std::optional<double> time_to_all_localized;
};

struct RunOptions {
  // Overrides run.output_dir (CONE_MAPPER_OUT is applied by the CLI).
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<strategy::SearchMode> mode;
  bool write_logs = true;
  bool quiet = true;
};

/// Runs the closed loop against the simulator and writes cones.csv,
/// viewpoints.csv, metrics.csv, lambda.txt, sensitivity.txt, resolved.cfg
/// and summary.txt (plus plans.csv with run.debug_plans).
MissionReport run(const PreparedMission& mission, const RunOptions& options = {});

/// Reconstruction and metrics from logs; writes metrics.csv, lambda.txt,
/// sensitivity.txt, resolved.cfg and summary.txt into the output directory.
MissionReport replay(const PreparedMission& mission, const std::string& cone_log,
                     const std::string& viewpoint_log, const RunOptions& options = {});

struct BatchRun {
  std::uint64_t seed = 0;
  strategy::SearchMode mode = strategy::SearchMode::active;
  std::vector<strategy::CycleRecord> series;
  std::optional<double> time_to_all_localized;
};

struct BatchResult {
  std::vector<BatchRun> runs;
  std::string runs_csv;
  std::string aggregate_csv;
  std::string paired_csv;  // empty unless paired
  std::size_t active_wins = 0;
  std::size_t pairs = 0;
};

/// Seeds seed_base .. seed_base + n_runs - 1. Per-run rows are flushed as
/// they finish so a failure keeps the completed ones. With `paired`, each
/// seed runs once per strategy and a paired time-to-all-localized table is
/// written.
BatchResult batch(const PreparedMission& mission, std::size_t n_runs, std::uint64_t seed_base,
                  bool paired, const std::string& output_dir, bool write_run_artifacts = false);

/// Metrics CSV text for a series (schema line, header, rows).
std::string metrics_csv(const std::vector<strategy::CycleRecord>& series, std::size_t n_sources,
                        const std::string& mode);

}  // namespace cone_mapper::app
