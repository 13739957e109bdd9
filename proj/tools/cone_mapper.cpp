// Command-line front end: run, replay, batch, table build.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cone_mapper/app/config.hpp"
#include "cone_mapper/app/runner.hpp"
#include "cone_mapper/core/error.hpp"

using namespace cone_mapper;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::optional<std::string> env_output_dir() {
  if (const char* v = std::getenv("CONE_MAPPER_OUT"); v && *v) return std::string(v);
  return std::nullopt;
}

// --out beats CONE_MAPPER_OUT beats run.output_dir.
std::optional<std::string> pick_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  return env_output_dir();
}

void print_final(const app::MissionReport& r) {
  std::cout << "output: " << r.output_dir << '\n';
  if (!r.outcome.series.empty()) {
    const auto& last = r.outcome.series.back();
    std::cout << "t = " << last.t << " s, cones = " << last.n_cones
              << ", rmse = " << last.metrics.rmse
              << " m, localized = " << last.metrics.n_localized << '\n';
  }
  if (r.time_to_all_localized) {
    std::cout << "all sources localized from t = " << *r.time_to_all_localized << " s\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Multi-agent Compton-camera source search: simulate, reconstruct, plan."};
  cli.set_version_flag("--version", app::kVersion);
  cli.require_subcommand(1);

  std::string config_path, out_dir, strategy_name, cones_path, vps_path, table_out;
  std::uint64_t seed = 0, seed_base = 1;
  std::size_t n_runs = 1;
  bool verbose = false, paired = false, artifacts = false;

  auto* run_cmd = cli.add_subcommand("run", "Run a mission against the simulator");
  run_cmd->add_option("config", config_path, "Mission config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides run.output_dir)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override run.seed");
  run_cmd->add_option("--strategy", strategy_name, "Override run.strategy")
      ->check(CLI::IsMember({"active", "zigzag"}));
  run_cmd->add_flag("-v,--verbose", verbose, "Print one line per cycle");

  auto* replay_cmd = cli.add_subcommand("replay", "Reconstruct from recorded logs");
  replay_cmd->add_option("config", config_path, "Mission config file")->required();
  replay_cmd->add_option("--cones", cones_path, "Cone log CSV")->required();
  replay_cmd->add_option("--viewpoints", vps_path, "Viewpoint log CSV")->required();
  replay_cmd->add_option("--out", out_dir, "Output directory");
  replay_cmd->add_flag("-v,--verbose", verbose, "Print one line per cycle");

  auto* batch_cmd = cli.add_subcommand("batch", "Run several seeds and aggregate");
  batch_cmd->add_option("config", config_path, "Mission config file")->required();
  batch_cmd->add_option("--runs", n_runs, "Number of runs")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--seed-base", seed_base, "First seed");
  batch_cmd->add_flag("--paired", paired, "Run active and zigzag on every seed");
  batch_cmd->add_flag("--artifacts", artifacts, "Keep full per-run outputs");
  batch_cmd->add_option("--out", out_dir, "Output directory");

  auto* table_cmd = cli.add_subcommand("table", "Detector lookup table tools");
  table_cmd->require_subcommand(1);
  auto* build_cmd = table_cmd->add_subcommand("build", "Build the chord-length lookup table");
  build_cmd->add_option("config", config_path, "Mission config file")->required();
  build_cmd->add_option("--out", table_out, "Output table file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const app::MissionConfig cfg = app::load_config(config_path);

    if (*build_cmd) {
      app::MissionConfig c = cfg;
      c.table = "builtin";
      app::build_table(c).save(table_out);
      std::cout << "wrote " << table_out << '\n';
      return 0;
    }

    const app::PreparedMission mission = app::prepare(cfg);

    if (*run_cmd) {
      app::RunOptions opt;
      opt.output_dir = pick_out(out_dir);
      if (*seed_opt) opt.seed = seed;
      if (!strategy_name.empty()) opt.mode = strategy::parse_search_mode(strategy_name);
      opt.quiet = !verbose;
      print_final(app::run(mission, opt));
      return 0;
    }
    if (*replay_cmd) {
      app::RunOptions opt;
      opt.output_dir = pick_out(out_dir);
      opt.quiet = !verbose;
      print_final(app::replay(mission, cones_path, vps_path, opt));
      return 0;
    }
    if (*batch_cmd) {
      const std::string dir = pick_out(out_dir).value_or(cfg.output_dir);
      const auto res = app::batch(mission, n_runs, seed_base, paired, dir, artifacts);
      std::cout << "runs: " << res.runs_csv << "\naggregate: " << res.aggregate_csv << '\n';
      if (paired) {
        std::cout << "paired: " << res.paired_csv << "\nactive faster in " << res.active_wins
                  << " of " << res.pairs << " pairs\n";
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
