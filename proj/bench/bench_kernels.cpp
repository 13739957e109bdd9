// Serial reference vs OpenMP kernels on full-scenario inputs (100 x 100 cells).
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "cone_mapper/app/config.hpp"
#include "cone_mapper/app/runner.hpp"
#include "cone_mapper/physics/detector.hpp"
#include "cone_mapper/recon/mlem.hpp"
#include "cone_mapper/recon/sensitivity.hpp"
#include "cone_mapper/recon/system_row.hpp"

using namespace cone_mapper;

namespace {

struct Inputs {
  app::PreparedMission mission;
  std::vector<ComptonCone> cones;
  std::vector<Viewpoint> viewpoints;
  std::vector<recon::SystemRow> rows;
  recon::SensitivityField sensitivity;
};

const Inputs& inputs() {
  static const Inputs in = [] {
    Inputs x{app::prepare(app::load_config(CM_CONFIG_DIR "/five_sources.cfg")), {}, {}, {}, {}};
    auto world = x.mission.make_world(1);
    for (int k = 0; k < 1200; ++k) {
      if (k % 200 == 0)
        for (std::size_t a = 0; a < world.agents().size(); ++a)
          world.dispatch(a, {{5.0 + 15 * a, 5.0 + 0.03 * k, 0}, {20.0 + 10 * a, 45 - 0.02 * k, 0}});
      auto s = world.step(x.mission.config.dt);
      x.cones.insert(x.cones.end(), s.cones.begin(), s.cones.end());
      x.viewpoints.insert(x.viewpoints.end(), s.viewpoints.begin(), s.viewpoints.end());
    }
    const auto& m = x.mission;
    x.rows = recon::system_rows(x.cones, m.grid, m.settings.recon.projection, m.table);
    x.sensitivity = recon::SensitivityField(m.grid.size());
    recon::sensitivity_update(x.sensitivity, x.viewpoints, m.grid, m.sim.attenuation, m.table,
                              m.config.dt);
    return x;
  }();
  return in;
}

template <bool Parallel>
void BM_SystemRows(benchmark::State& st) {
  const auto& in = inputs();
  const auto& m = in.mission;
  for (auto _ : st) {
    auto rows = Parallel ? recon::system_rows(in.cones, m.grid, m.settings.recon.projection, m.table)
                         : recon::system_rows_serial(in.cones, m.grid, m.settings.recon.projection,
                                                     m.table);
    benchmark::DoNotOptimize(rows.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(in.cones.size()));
}

template <bool Parallel>
void BM_Sensitivity(benchmark::State& st) {
  const auto& in = inputs();
  const auto& m = in.mission;
  for (auto _ : st) {
    recon::SensitivityField s(m.grid.size());
    if (Parallel)
      recon::sensitivity_update(s, in.viewpoints, m.grid, m.sim.attenuation, m.table, m.config.dt);
    else
      recon::sensitivity_update_serial(s, in.viewpoints, m.grid, m.sim.attenuation, m.table,
                                       m.config.dt);
    benchmark::DoNotOptimize(s.values.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(in.viewpoints.size()));
}

template <bool Parallel>
void BM_Mlem(benchmark::State& st) {
  const auto& in = inputs();
  const auto init = recon::uniform_init(in.sensitivity);
  for (auto _ : st) {
    auto r = Parallel ? recon::mlem(init, in.rows, in.sensitivity, 10)
                      : recon::mlem_serial(init, in.rows, in.sensitivity, 10);
    benchmark::DoNotOptimize(r.lambda.values.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(in.rows.size()));
}

template <bool Parallel>
void BM_ChordLookup(benchmark::State& st) {
  const physics::DetectorGeometry g;
  for (auto _ : st) {
    auto t = Parallel ? physics::build_chord_lookup(g, 36, 18, 1024, 7)
                      : physics::build_chord_lookup_serial(g, 36, 18, 1024, 7);
    benchmark::DoNotOptimize(t.max());
  }
}

}  // namespace

BENCHMARK(BM_SystemRows<false>)->Name("system_rows/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SystemRows<true>)->Name("system_rows/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity<false>)->Name("sensitivity/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity<true>)->Name("sensitivity/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mlem<false>)->Name("mlem10/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mlem<true>)->Name("mlem10/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChordLookup<false>)->Name("chord_lookup/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChordLookup<true>)->Name("chord_lookup/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
