#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/recon/fields.hpp"
#include "cone_mapper/recon/metrics.hpp"
#include "cone_mapper/sim/world.hpp"
#include "cone_mapper/strategy/config.hpp"
#include "cone_mapper/strategy/planner.hpp"
#include "cone_mapper/strategy/waypoints.hpp"

namespace cone_mapper::strategy {

enum class SearchMode { active, zigzag };

const char* to_string(SearchMode mode);
std::optional<SearchMode> parse_search_mode(std::string_view s);

struct ReconSettings {
  recon::ProjectionParams projection;
  int n_iter = 10;
  // Start each cycle's MLEM from the previous estimate instead of uniform.
  bool warm_start = false;
};

/// Online reconstruction state: system rows and sensitivity accumulate as
/// measurements arrive; every estimate() runs MLEM over all rows so far.
class Estimator {
 public:
  Estimator(const GridMap& grid, const physics::LookupTable& table, ReconSettings settings,
            double first_dt);

  void ingest(std::span<const ComptonCone> cones, std::span<const Viewpoint> viewpoints);
  const recon::LambdaField& estimate();

  const recon::LambdaField& lambda() const { return lambda_; }
  const recon::SensitivityField& sensitivity() const { return sensitivity_; }
  std::size_t n_cones() const { return n_cones_; }
  std::size_t n_rows() const { return rows_.size(); }

 private:
  const GridMap& grid_;
  const physics::LookupTable& table_;
  ReconSettings settings_;
  double first_dt_;
  std::vector<recon::SystemRow> rows_;
  std::size_t n_cones_ = 0;
  recon::SensitivityField sensitivity_;
  recon::LambdaField lambda_;
};

struct CycleRecord {
  double t = 0.0;
  std::size_t cycle = 0;
  std::size_t n_cones = 0;
  recon::LocalizationMetrics metrics;  // rmse NaN when undefined
  double frac_unexplored = 0.0;
  std::size_t n_exploitation = 0;  // waypoints generated this cycle
  std::size_t n_exploration = 0;
};

struct MissionSettings {
  StrategyConfig strategy;
  ReconSettings recon;
  double dt = 0.25;
  double duration = 400.0;
  SearchMode mode = SearchMode::active;
  double zigzag_step = 2.0;
  double localize_tolerance = 2.0;
  std::uint64_t seed = 1;
  std::vector<Position3> true_sources;  // for metrics only

  std::size_t steps_per_cycle() const;
  std::size_t total_steps() const;
  void validate() const;
};

/// Hooks for artifact writers. All default to no-ops.
class MissionObserver {
 public:
  virtual ~MissionObserver() = default;
  virtual void on_step(const sim::StepOutput&) {}
  virtual void on_cycle(const CycleRecord&, const Estimator&) {}
  virtual void on_plan(const CycleRecord&, const PlanState&) {}
  virtual void on_warning(const std::string&) {}
};

struct MissionOutcome {
  std::vector<CycleRecord> series;
  bool completed = false;  // waypoint set ran empty before the budget
  double end_time = 0.0;
  std::size_t n_steps = 0;
  std::size_t skipped_waypoints = 0;
  recon::LambdaField final_lambda;
  recon::SensitivityField final_sensitivity;
};

/// Closed loop against the simulator. Cycles run at step 0, every
/// replan period, and at the final step: ingest, reconstruct, record
/// metrics, then (active mode) generate, assign, sequence, plan and dispatch
/// waypoints. Zigzag mode dispatches fixed coverage paths once at step 0.
MissionOutcome run_mission(sim::World& world, const MissionSettings& settings,
                           MissionObserver* observer = nullptr);

/// Reconstruction and metrics only, driven by logged measurements. Cycle
/// boundaries are recovered from the distinct viewpoint timestamps so a
/// run's own logs reproduce its cycle series exactly.
MissionOutcome replay_mission(std::span<const ComptonCone> cones,
                              std::span<const Viewpoint> viewpoints, const GridMap& grid,
                              const physics::LookupTable& table,
                              const MissionSettings& settings,
                              MissionObserver* observer = nullptr);

/// Earliest cycle time from which every source stays localized until the
/// end of the series; nullopt if that never happens.
std::optional<double> time_to_all_localized(const std::vector<CycleRecord>& series,
                                            std::size_t n_sources);

}  // namespace cone_mapper::strategy
