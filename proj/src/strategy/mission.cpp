#include "cone_mapper/strategy/mission.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/rng.hpp"
#include "cone_mapper/recon/maxima.hpp"
#include "cone_mapper/recon/mlem.hpp"
#include "cone_mapper/recon/sensitivity.hpp"
#include "cone_mapper/recon/system_row.hpp"
#include "cone_mapper/strategy/kmeans.hpp"
#include "cone_mapper/strategy/tsp.hpp"
#include "cone_mapper/strategy/zigzag.hpp"

namespace cone_mapper::strategy {

const char* to_string(SearchMode mode) {
  return mode == SearchMode::active ? "active" : "zigzag";
}

std::optional<SearchMode> parse_search_mode(std::string_view s) {
  if (s == "active") return SearchMode::active;
  if (s == "zigzag") return SearchMode::zigzag;
  return std::nullopt;
}

Estimator::Estimator(const GridMap& grid, const physics::LookupTable& table,
                     ReconSettings settings, double first_dt)
    : grid_(grid),
      table_(table),
      settings_(settings),
      first_dt_(first_dt),
      sensitivity_(grid.size()) {
  settings_.projection.validate();
  if (settings_.n_iter < 1) throw ConfigError("recon.n_iter must be >= 1");
  lambda_ = recon::uniform_init(sensitivity_);
}

void Estimator::ingest(std::span<const ComptonCone> cones, std::span<const Viewpoint> viewpoints) {
  if (!viewpoints.empty()) {
    recon::sensitivity_update(sensitivity_, viewpoints, grid_, settings_.projection.attenuation,
                              table_, first_dt_);
  }
  if (!cones.empty()) {
    auto rows = recon::system_rows(cones, grid_, settings_.projection, table_);
    for (auto& r : rows) {
      if (!r.empty()) rows_.push_back(std::move(r));
    }
    n_cones_ += cones.size();
  }
}

const recon::LambdaField& Estimator::estimate() {
  recon::LambdaField init = recon::uniform_init(sensitivity_);
  if (settings_.warm_start && lambda_.values.size() == init.values.size()) {
    for (std::size_t j = 0; j < init.values.size(); ++j) {
      if (init.values[j] > 0.0 && lambda_.values[j] > 0.0) init.values[j] = lambda_.values[j];
    }
  }
  if (rows_.empty()) {
    lambda_ = std::move(init);
  } else {
    lambda_ = recon::mlem(init, rows_, sensitivity_, settings_.n_iter).lambda;
  }
  return lambda_;
}

std::size_t MissionSettings::steps_per_cycle() const {
  return static_cast<std::size_t>(std::max(1.0, std::round(strategy.replan_period / dt)));
}

std::size_t MissionSettings::total_steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

void MissionSettings::validate() const {
  strategy.validate();
  recon.projection.validate();
  if (recon.n_iter < 1) throw ConfigError("recon.n_iter must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("run.dt must be > 0");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("run.duration must be >= 0");
  if (!(zigzag_step > 0.0)) throw ConfigError("strategy.zigzag_step must be > 0");
  if (!(localize_tolerance > 0.0)) throw ConfigError("run.localize_tolerance must be > 0");
}

namespace {

CycleRecord make_record(double t, std::size_t cycle, const Estimator& est, const GridMap& grid,
                        const MissionSettings& settings) {
  CycleRecord rec;
  rec.t = t;
  rec.cycle = cycle;
  rec.n_cones = est.n_cones();
  const std::size_t n_src = settings.true_sources.size();
  if (n_src > 0) {
    const auto peaks = recon::local_maxima(est.lambda(), grid, n_src).peaks;
    std::vector<Position3> estimates;
    for (const auto& p : peaks) estimates.push_back(p.position);
    rec.metrics =
        recon::localization_metrics(estimates, settings.true_sources, settings.localize_tolerance);
  } else {
    rec.metrics.rmse = std::numeric_limits<double>::quiet_NaN();
    rec.metrics.rmse_defined = false;
  }
  const auto& s = est.sensitivity().values;
  const auto low = std::count_if(s.begin(), s.end(),
                                 [&](double v) { return v < settings.strategy.s_min; });
  rec.frac_unexplored = grid.size() ? static_cast<double>(low) / static_cast<double>(grid.size()) : 0.0;
  return rec;
}

// Turns a time-indexed cell path into flight waypoints: waits and the
// current cell are dropped.
std::vector<Position3> path_to_waypoints(const std::vector<CellIndex>& path, const GridMap& grid) {
  std::vector<Position3> out;
  for (std::size_t t = 1; t < path.size(); ++t) {
    if (path[t] == path[t - 1]) continue;
    out.push_back(grid.center(path[t]));
  }
  return out;
}

void dispatch_zigzag(sim::World& world, const MissionSettings& settings) {
  const GridMap& grid = world.grid();
  const SearchArea area{grid.origin(), grid.extent_x(), grid.extent_y()};
  const auto patterns = zigzag(area, settings.zigzag_step, world.agents().size());
  for (std::size_t a = 0; a < patterns.size(); ++a) {
    const auto& agent = world.agents()[a];
    const auto& fwd = patterns[a];
    const double one_way = polyline_length(fwd);
    const double budget = settings.duration * std::max(agent.speed, 1e-9) +
                          std::sqrt(planar_distance2(agent.pose.position(), fwd.front()));
    // Sweep back and forth until the time budget is certainly covered.
    std::vector<Position3> path(fwd.begin(), fwd.end());
    double covered = one_way;
    bool reverse = true;
    while (covered < budget && one_way > 0.0) {
      if (reverse) {
        path.insert(path.end(), fwd.rbegin() + 1, fwd.rend());
      } else {
        path.insert(path.end(), fwd.begin() + 1, fwd.end());
      }
      covered += one_way;
      reverse = !reverse;
    }
    world.dispatch(a, path);
  }
}

// Returns the number of skipped waypoints.
std::size_t plan_and_dispatch(sim::World& world, const WaypointSet& wps, const CycleRecord& rec,
                              MissionObserver* observer) {
  const GridMap& grid = world.grid();
  const std::size_t n_agents = world.agents().size();
  std::vector<Position3> agent_pos;
  std::vector<CellIndex> starts;
  for (const auto& a : world.agents()) {
    agent_pos.push_back(a.pose.position());
    starts.push_back(grid.nearest_cell(a.pose.position()));
  }
  const auto positions = wps.positions();
  const auto groups = assign_to_agents(positions, agent_pos);

  std::vector<std::vector<CellIndex>> sequences(n_agents);
  for (std::size_t a = 0; a < n_agents; ++a) {
    std::vector<std::size_t> idx = groups[a];
    if (idx.size() > kMaxSequenceLength) {
      // Keep the nearest ones; the rest come back in a later cycle.
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
        return planar_distance2(positions[l], agent_pos[a]) <
               planar_distance2(positions[r], agent_pos[a]);
      });
      idx.resize(kMaxSequenceLength);
    }
    std::vector<Position3> pts;
    for (const std::size_t i : idx) pts.push_back(positions[i]);
    for (const std::size_t k : sequence(pts, agent_pos[a])) {
      sequences[a].push_back(wps.waypoints[idx[k]].cell);
    }
  }
  const PlanState plan = plan_paths(sequences, grid, starts);
  std::size_t skipped = 0;
  for (std::size_t a = 0; a < n_agents; ++a) {
    skipped += plan.agents[a].skipped.size();
    world.dispatch(a, path_to_waypoints(plan.agents[a].path, grid));
  }
  if (observer) observer->on_plan(rec, plan);
  return skipped;
}

}  // namespace

MissionOutcome run_mission(sim::World& world, const MissionSettings& settings,
                           MissionObserver* observer) {
  settings.validate();
  const GridMap& grid = world.grid();
  Estimator est(grid, world.table(), settings.recon, settings.dt);
  const std::size_t spc = settings.steps_per_cycle();
  const std::size_t n_total = settings.total_steps();

  MissionOutcome out;
  std::vector<ComptonCone> pending_cones;
  std::vector<Viewpoint> pending_vps;
  std::deque<VisitRecord> recent;
  std::size_t cycle = 0;

  for (std::size_t n = 0;; ++n) {
    if (n % spc == 0 || n == n_total) {
      est.ingest(pending_cones, pending_vps);
      pending_cones.clear();
      pending_vps.clear();
      est.estimate();
      CycleRecord rec = make_record(world.clock(), cycle, est, grid, settings);

      if (settings.mode == SearchMode::zigzag) {
        if (n == 0 && n_total > 0) dispatch_zigzag(world, settings);
      } else if (n < n_total) {
        try {
          while (!recent.empty() && world.clock() - recent.front().t > settings.strategy.recent_window) {
            recent.pop_front();
          }
          const std::vector<VisitRecord> recent_vec(recent.begin(), recent.end());
          const WaypointSet wps =
              generate_waypoints(est.lambda(), est.sensitivity(), grid, settings.strategy,
                                 recent_vec, world.clock(), derive_seed({settings.seed, cycle, 3}));
          rec.n_exploitation = wps.count(WaypointKind::exploitation);
          rec.n_exploration = wps.count(WaypointKind::exploration);
          if (wps.empty() && wps.n_filtered == 0) {
            out.completed = true;
          } else if (!wps.empty()) {
            out.skipped_waypoints += plan_and_dispatch(world, wps, rec, observer);
          }
        } catch (const Error& e) {
          if (observer) observer->on_warning(std::string("cycle ") + std::to_string(cycle) +
                                             ": planning failed, keeping previous plan: " + e.what());
        }
      }
      out.series.push_back(rec);
      if (observer) observer->on_cycle(rec, est);
      ++cycle;
    }
    if (n >= n_total || out.completed) break;

    sim::StepOutput step = world.step(settings.dt);
    for (const auto& vp : step.viewpoints) recent.push_back({vp.timestamp, vp.pose.position()});
    if (observer) observer->on_step(step);
    pending_cones.insert(pending_cones.end(), step.cones.begin(), step.cones.end());
    pending_vps.insert(pending_vps.end(), step.viewpoints.begin(), step.viewpoints.end());
    out.n_steps = n + 1;
  }
  out.end_time = world.clock();
  out.final_lambda = est.lambda();
  out.final_sensitivity = est.sensitivity();
  return out;
}

MissionOutcome replay_mission(std::span<const ComptonCone> cones_in,
                              std::span<const Viewpoint> vps_in, const GridMap& grid,
                              const physics::LookupTable& table, const MissionSettings& settings,
                              MissionObserver* observer) {
  settings.validate();
  std::vector<ComptonCone> cones(cones_in.begin(), cones_in.end());
  std::vector<Viewpoint> vps(vps_in.begin(), vps_in.end());
  std::stable_sort(cones.begin(), cones.end(), [](const ComptonCone& a, const ComptonCone& b) {
    return a.timestamp() < b.timestamp();
  });
  std::stable_sort(vps.begin(), vps.end(),
                   [](const Viewpoint& a, const Viewpoint& b) { return a.timestamp < b.timestamp; });
  std::vector<double> times;
  for (const auto& v : vps) {
    if (times.empty() || v.timestamp != times.back()) times.push_back(v.timestamp);
  }

  Estimator est(grid, table, settings.recon, settings.dt);
  const std::size_t spc = settings.steps_per_cycle();
  const std::size_t n_total = times.size();
  MissionOutcome out;
  std::size_t ic = 0, iv = 0, cycle = 0;
  for (std::size_t n = 0; n <= n_total; ++n) {
    if (n % spc != 0 && n != n_total) continue;
    const double t = n == 0 ? 0.0 : times[n - 1];
    const std::size_t ic0 = ic, iv0 = iv;
    while (ic < cones.size() && cones[ic].timestamp() <= t) ++ic;
    while (iv < vps.size() && vps[iv].timestamp <= t) ++iv;
    est.ingest(std::span(cones).subspan(ic0, ic - ic0), std::span(vps).subspan(iv0, iv - iv0));
    est.estimate();
    const CycleRecord rec = make_record(t, cycle, est, grid, settings);
    out.series.push_back(rec);
    if (observer) observer->on_cycle(rec, est);
    ++cycle;
  }
  // Cones stamped after the last viewpoint would be dropped silently otherwise.
  if (ic < cones.size() && observer) {
    observer->on_warning(std::to_string(cones.size() - ic) +
                         " cones lie after the last viewpoint and were ignored");
  }
  out.n_steps = n_total;
  out.end_time = n_total ? times.back() : 0.0;
  out.final_lambda = est.lambda();
  out.final_sensitivity = est.sensitivity();
  return out;
}

std::optional<double> time_to_all_localized(const std::vector<CycleRecord>& series,
                                            std::size_t n_sources) {
  std::optional<double> since;
  for (const auto& r : series) {
    if (r.metrics.n_localized == n_sources) {
      if (!since) since = r.t;
    } else {
      since.reset();
    }
  }
  return since;
}

}  // namespace cone_mapper::strategy
