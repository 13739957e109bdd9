#include "cone_mapper/app/runner.hpp"

#include <algorithm>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/text.hpp"
#include "cone_mapper/physics/detector.hpp"
#include "cone_mapper/recon/field_io.hpp"
#include "cone_mapper/sim/logs.hpp"
#include "cone_mapper/strategy/config.hpp"

namespace fs = std::filesystem;

namespace cone_mapper::app {

physics::LookupTable build_table(const MissionConfig& c) {
  if (c.table == "file") return physics::LookupTable::load(c.table_file);
  physics::DetectorGeometry geo;
  geo.kappa = c.kappa;
  return physics::build_chord_lookup(geo, static_cast<std::size_t>(c.table_nphi),
                                     static_cast<std::size_t>(c.table_ntheta),
                                     static_cast<std::size_t>(c.table_samples), c.table_seed);
}

PreparedMission prepare(const MissionConfig& c) {
  c.validate();
  PreparedMission m{c,
                    GridMap::from_extent({c.origin_x, c.origin_y, c.origin_z}, c.extent_x,
                                         c.extent_y, c.resolution),
                    build_table(c),
                    {},
                    {},
                    {},
                    {},
                    0.0,
                    0.0};

  m.sim.noise = {c.noise_sigma, c.p_ambiguous, c.background_rate, c.beta_min, c.beta_max};
  m.sim.attenuation.mu = c.mu;
  m.sim.reference_area = physics::DetectorGeometry{}.reference_area();
  m.sim.seed = c.seed;
  m.sim.validate();

  for (const auto& s : c.sources) m.sources.push_back({{s.x, s.y, s.z}, s.activity});
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    const auto& e = c.agents[a];
    sim::AgentState st;
    st.id = static_cast<AgentId>(a);
    st.max_speed = c.max_speed;
    st.speed = c.speed;
    st.flight_height = c.flight_height;
    const double z = c.origin_z + m.grid.terrain_height(e.x, e.y) + c.flight_height;
    st.pose = SensorPose({e.x, e.y, z}, 0.0, 0.0, e.yaw);
    st.validate();
    m.agents.push_back(st);
  }

  if (c.s_min_mode == "fixed") {
    m.s_min = c.s_min;
  } else {
    m.s_min = strategy::single_pass_sensitivity(m.table, m.sim.attenuation, c.flight_height,
                                                c.pass_lateral, std::min(c.speed, c.max_speed),
                                                c.dt, c.pass_length);
    if (!(m.s_min > 0.0)) {
      throw ConfigError("config key 'strategy.s_min_mode': automatic s_min came out as zero");
    }
  }
  m.s_max = c.s_max_factor * m.s_min;

  auto& s = m.settings;
  s.strategy.s_min = m.s_min;
  s.strategy.s_max = m.s_max;
  s.strategy.k_explore = static_cast<std::size_t>(c.k_explore);
  s.strategy.recent_radius = c.recent_radius;
  s.strategy.recent_window = c.recent_window;
  s.strategy.replan_period = c.replan_period;
  s.strategy.max_exploitation = static_cast<std::size_t>(c.max_exploitation);
  s.recon.projection.sigma = c.recon_sigma;
  s.recon.projection.attenuation.mu = c.mu;
  s.recon.projection.eps_t = c.eps_t;
  s.recon.projection.band = c.band;
  s.recon.n_iter = static_cast<int>(c.n_iter);
  s.recon.warm_start = c.warm_start;
  s.dt = c.dt;
  s.duration = c.duration;
  s.mode = *strategy::parse_search_mode(c.strategy);
  s.zigzag_step = c.zigzag_step;
  s.localize_tolerance = c.localize_tolerance;
  s.seed = c.seed;
  for (const auto& src : m.sources) s.true_sources.push_back(src.position);
  s.validate();
  return m;
}

sim::World PreparedMission::make_world(std::uint64_t seed) const {
  sim::SimParams p = sim;
  p.seed = seed;
  return sim::World(grid, sources, agents, table, p);
}

strategy::MissionSettings PreparedMission::settings_for(std::uint64_t seed,
                                                        strategy::SearchMode mode) const {
  strategy::MissionSettings s = settings;
  s.seed = seed;
  s.mode = mode;
  return s;
}

std::string run_header(const PreparedMission& m, const std::string& mode) {
  std::ostringstream os;
  os << "# cone_mapper " << kVersion << " (" << mode << ")\n"
     << "# resolved grid.nx = " << m.grid.nx() << "\n"
     << "# resolved grid.ny = " << m.grid.ny() << "\n"
     << "# resolved strategy.s_min = " << format_double(m.s_min) << "\n"
     << "# resolved strategy.s_max = " << format_double(m.s_max) << "\n"
     << "# resolved table.mean = " << format_double(m.table.mean()) << "\n"
     << "# resolved table.max = " << format_double(m.table.max()) << "\n"
     << "# resolved steps_per_cycle = " << m.settings.steps_per_cycle() << "\n"
     << "# resolved total_steps = " << m.settings.total_steps() << "\n\n"
     << serialize_config(m.config);
  return os.str();
}

std::string metrics_csv(const std::vector<strategy::CycleRecord>& series, std::size_t n_sources,
                        const std::string& mode) {
  std::ostringstream os;
  os << "# " << kMetricsSchema << "\n# mode: " << mode << "\n";
  os << "t,cycle,n_cones,rmse,n_localized,frac_unexplored";
  for (std::size_t i = 0; i < n_sources; ++i) os << ",per_source_err_" << i + 1;
  os << '\n';
  for (const auto& r : series) {
    os << format_double(r.t) << ',' << r.cycle << ',' << r.n_cones << ','
       << format_double(r.metrics.rmse) << ',' << r.metrics.n_localized << ','
       << format_double(r.frac_unexplored);
    for (std::size_t i = 0; i < n_sources; ++i) {
      os << ',' << format_double(r.metrics.per_source_error.at(i));
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write '" + p.string() + "'");
  os.precision(17);
  return os;
}

void write_text(const fs::path& p, const std::string& text) {
  auto os = open_out(p);
  os << text;
  if (!os) throw Error("write failed for '" + p.string() + "'");
}

class ArtifactObserver final : public strategy::MissionObserver {
 public:
  ArtifactObserver(std::ostream* cones, std::ostream* vps, std::ostream* plans,
                   const GridMap& grid, bool quiet)
      : grid_(grid), quiet_(quiet), plans_(plans) {
    if (cones) cone_writer_.emplace(*cones);
    if (vps) vp_writer_.emplace(*vps);
    if (plans_) *plans_ << "# cone_mapper/plans v1\ncycle,t,agent,record,order,cell,x,y\n";
  }

  void on_step(const sim::StepOutput& out) override {
    if (cone_writer_) cone_writer_->write(out.cones);
    if (vp_writer_) vp_writer_->write(out.viewpoints);
  }

  void on_plan(const strategy::CycleRecord& rec, const strategy::PlanState& plan) override {
    if (!plans_) return;
    for (std::size_t a = 0; a < plan.agents.size(); ++a) {
      const auto& ap = plan.agents[a];
      auto row = [&](const char* what, std::size_t k, CellIndex c) {
        const Position3& p = grid_.center(c);
        *plans_ << rec.cycle << ',' << format_double(rec.t) << ',' << a << ',' << what << ','
                << k << ',' << c << ',' << format_double(p.x) << ',' << format_double(p.y)
                << '\n';
      };
      for (std::size_t k = 0; k < ap.sequence.size(); ++k) row("waypoint", k, ap.sequence[k]);
      for (std::size_t k = 0; k < ap.skipped.size(); ++k) row("skipped", k, ap.skipped[k]);
      for (std::size_t k = 0; k < ap.path.size(); ++k) row("path", k, ap.path[k]);
    }
  }

  void on_cycle(const strategy::CycleRecord& rec, const strategy::Estimator&) override {
    if (quiet_) return;
    std::cerr << "t=" << rec.t << " cycle=" << rec.cycle << " cones=" << rec.n_cones
              << " rmse=" << rec.metrics.rmse << " localized=" << rec.metrics.n_localized
              << " unexplored=" << rec.frac_unexplored << " wp=" << rec.n_exploitation << "+"
              << rec.n_exploration << '\n';
  }

  void on_warning(const std::string& msg) override { std::cerr << "warning: " << msg << '\n'; }

 private:
  const GridMap& grid_;
  bool quiet_;
  std::ostream* plans_;
  std::optional<sim::ConeLogWriter> cone_writer_;
  std::optional<sim::ViewpointLogWriter> vp_writer_;
};

std::string format_opt(const std::optional<double>& v) { return v ? format_double(*v) : "inf"; }

void write_summary(const fs::path& p, const PreparedMission& m, const std::string& mode,
                   const MissionReport& r) {
  std::ostringstream os;
  os << "# cone_mapper/summary v1\n"
     << "mode = " << mode << '\n'
     << "strategy = " << strategy::to_string(m.settings.mode) << '\n'
     << "seed = " << m.config.seed << '\n'
     << "cycles = " << r.outcome.series.size() << '\n'
     << "steps = " << r.outcome.n_steps << '\n'
     << "end_time = " << format_double(r.outcome.end_time) << '\n'
     << "completed = " << (r.outcome.completed ? "true" : "false") << '\n'
     << "skipped_waypoints = " << r.outcome.skipped_waypoints << '\n';
  if (!r.outcome.series.empty()) {
    const auto& last = r.outcome.series.back();
    os << "final_n_cones = " << last.n_cones << '\n'
       << "final_rmse = " << format_double(last.metrics.rmse) << '\n'
       << "final_n_localized = " << last.metrics.n_localized << '\n'
       << "final_frac_unexplored = " << format_double(last.frac_unexplored) << '\n';
  }
  os << "time_to_all_localized = " << format_opt(r.time_to_all_localized) << '\n';
  write_text(p, os.str());
}

MissionReport finish(const PreparedMission& m, strategy::MissionOutcome outcome, const fs::path& dir,
                     const std::string& mode) {
  MissionReport r;
  r.outcome = std::move(outcome);
  r.output_dir = dir.string();
  r.time_to_all_localized =
      strategy::time_to_all_localized(r.outcome.series, m.sources.size());
  r.metrics_csv = (dir / "metrics.csv").string();
  write_text(r.metrics_csv, metrics_csv(r.outcome.series, m.sources.size(), mode));
  r.lambda_dump = (dir / "lambda.txt").string();
  r.sensitivity_dump = (dir / "sensitivity.txt").string();
  recon::write_field(r.lambda_dump, m.grid, r.outcome.final_lambda.values);
  recon::write_field(r.sensitivity_dump, m.grid, r.outcome.final_sensitivity.values);
  r.summary = (dir / "summary.txt").string();
  write_summary(r.summary, m, mode, r);
  return r;
}

}  // namespace

MissionReport run(const PreparedMission& base, const RunOptions& opt) {
  PreparedMission m = base;
  if (opt.seed) {
    m.config.seed = *opt.seed;
    m.sim.seed = *opt.seed;
    m.settings.seed = *opt.seed;
  }
  if (opt.mode) {
    m.settings.mode = *opt.mode;
    m.config.strategy = strategy::to_string(*opt.mode);
  }
  if (opt.output_dir) m.config.output_dir = *opt.output_dir;
  const fs::path dir = m.config.output_dir;
  fs::create_directories(dir);

  const std::string header = run_header(m, "run");
  write_text(dir / "resolved.cfg", header);

  std::optional<std::ofstream> cones, vps, plans;
  if (opt.write_logs) {
    cones.emplace(open_out(dir / "cones.csv"));
    vps.emplace(open_out(dir / "viewpoints.csv"));
  }
  if (m.config.debug_plans) plans.emplace(open_out(dir / "plans.csv"));
  ArtifactObserver artifacts(cones ? &*cones : nullptr, vps ? &*vps : nullptr,
                             plans ? &*plans : nullptr, m.grid, opt.quiet);

  sim::World world = m.make_world(m.sim.seed);
  strategy::MissionOutcome outcome = strategy::run_mission(world, m.settings, &artifacts);
  if (cones) cones->flush();
  if (vps) vps->flush();
  if (plans) plans->flush();
  MissionReport r = finish(m, std::move(outcome), dir, "run");
  r.header = header;
  if (opt.write_logs) {
    r.cone_log = (dir / "cones.csv").string();
    r.viewpoint_log = (dir / "viewpoints.csv").string();
  }
  return r;
}

MissionReport replay(const PreparedMission& base, const std::string& cone_log,
                     const std::string& viewpoint_log, const RunOptions& opt) {
  PreparedMission m = base;
  if (opt.output_dir) m.config.output_dir = *opt.output_dir;
  const auto cones = sim::read_cone_log(cone_log);
  const auto vps = sim::read_viewpoint_log(viewpoint_log);
  const fs::path dir = m.config.output_dir;
  fs::create_directories(dir);
  const std::string header = run_header(m, "replay");
  write_text(dir / "resolved.cfg", header);
  ArtifactObserver log(nullptr, nullptr, nullptr, m.grid, opt.quiet);
  auto outcome = strategy::replay_mission(cones, vps, m.grid, m.table, m.settings, &log);
  MissionReport r = finish(m, std::move(outcome), dir, "replay");
  r.header = header;
  r.cone_log = cone_log;
  r.viewpoint_log = viewpoint_log;
  return r;
}

BatchResult batch(const PreparedMission& m, std::size_t n_runs, std::uint64_t seed_base,
                  bool paired, const std::string& output_dir, bool write_run_artifacts) {
  if (n_runs < 1) throw ConfigError("batch: --runs must be >= 1");
  const fs::path dir = output_dir;
  fs::create_directories(dir);
  BatchResult res;
  res.runs_csv = (dir / "batch_runs.csv").string();
  res.aggregate_csv = (dir / "batch_aggregate.csv").string();
  write_text(dir / "resolved.cfg", run_header(m, "batch"));

  std::vector<strategy::SearchMode> modes;
  if (paired) {
    modes = {strategy::SearchMode::active, strategy::SearchMode::zigzag};
  } else {
    modes = {m.settings.mode};
  }
  const std::size_t n_src = m.sources.size();

  auto runs_os = open_out(res.runs_csv);
  runs_os << "# cone_mapper/batch_runs v1\n"
          << "seed,strategy,cycles,end_time,final_n_cones,final_rmse,final_n_localized,"
             "final_frac_unexplored,time_to_all_localized,completed\n";
  runs_os.flush();

  std::optional<std::ofstream> paired_os;
  if (paired) {
    res.paired_csv = (dir / "batch_paired.csv").string();
    paired_os.emplace(open_out(res.paired_csv));
    *paired_os << "# cone_mapper/batch_paired v1\n"
               << "seed,active_time_to_all,zigzag_time_to_all,active_wins\n";
    paired_os->flush();
  }

  for (std::size_t k = 0; k < n_runs; ++k) {
    const std::uint64_t seed = seed_base + k;
    std::vector<std::optional<double>> tta;
    for (const auto mode : modes) {
      BatchRun br;
      br.seed = seed;
      br.mode = mode;
      strategy::MissionOutcome outcome;
      if (write_run_artifacts) {
        RunOptions ro;
        ro.seed = seed;
        ro.mode = mode;
        ro.output_dir = (dir / ("run_" + std::string(strategy::to_string(mode)) + "_" +
                                std::to_string(seed)))
                            .string();
        outcome = run(m, ro).outcome;
      } else {
        sim::World world = m.make_world(seed);
        outcome = strategy::run_mission(world, m.settings_for(seed, mode));
      }
      br.series = std::move(outcome.series);
      br.time_to_all_localized = strategy::time_to_all_localized(br.series, n_src);
      tta.push_back(br.time_to_all_localized);

      runs_os << seed << ',' << strategy::to_string(mode) << ',' << br.series.size() << ','
              << format_double(outcome.end_time);
      if (!br.series.empty()) {
        const auto& last = br.series.back();
        runs_os << ',' << last.n_cones << ',' << format_double(last.metrics.rmse) << ','
                << last.metrics.n_localized << ',' << format_double(last.frac_unexplored);
      } else {
        runs_os << ",0,nan,0,nan";
      }
      runs_os << ',' << format_opt(br.time_to_all_localized) << ','
              << (outcome.completed ? "true" : "false") << '\n';
      runs_os.flush();
      res.runs.push_back(std::move(br));
    }
    if (paired) {
      const double a = tta[0].value_or(std::numeric_limits<double>::infinity());
      const double z = tta[1].value_or(std::numeric_limits<double>::infinity());
      const bool win = a < z;
      res.active_wins += win ? 1 : 0;
      ++res.pairs;
      *paired_os << seed << ',' << format_opt(tta[0]) << ',' << format_opt(tta[1]) << ','
                 << (win ? "true" : "false") << '\n';
      paired_os->flush();
    }
  }
  if (paired) {
    *paired_os << "# active_wins " << res.active_wins << " of " << res.pairs << '\n';
  }

  // Aggregate over runs per strategy and cycle; a run that ended early holds
  // its final values.
  auto agg = open_out(res.aggregate_csv);
  agg << "# cone_mapper/batch_aggregate v1\n"
      << "strategy,cycle,t,n_runs,mean_rmse,mean_n_localized\n";
  for (const auto mode : modes) {
    std::size_t max_cycles = 0;
    const BatchRun* longest = nullptr;
    for (const auto& br : res.runs) {
      if (br.mode == mode && br.series.size() > max_cycles) {
        max_cycles = br.series.size();
        longest = &br;
      }
    }
    for (std::size_t c = 0; c < max_cycles; ++c) {
      double sum_rmse = 0.0, sum_loc = 0.0;
      std::size_t n = 0;
      for (const auto& br : res.runs) {
        if (br.mode != mode || br.series.empty()) continue;
        const auto& r = br.series[std::min(c, br.series.size() - 1)];
        sum_rmse += r.metrics.rmse;
        sum_loc += static_cast<double>(r.metrics.n_localized);
        ++n;
      }
      agg << strategy::to_string(mode) << ',' << c << ',' << format_double(longest->series[c].t)
          << ',' << n << ',' << format_double(sum_rmse / static_cast<double>(n)) << ','
          << format_double(sum_loc / static_cast<double>(n)) << '\n';
    }
  }
  return res;
}

}  // namespace cone_mapper::app
