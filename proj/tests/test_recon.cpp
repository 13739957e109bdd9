#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/detector.hpp"
#include "cone_mapper/recon/field_io.hpp"
#include "cone_mapper/recon/maxima.hpp"
#include "cone_mapper/recon/metrics.hpp"
#include "cone_mapper/recon/mlem.hpp"
#include "cone_mapper/recon/sensitivity.hpp"
#include "cone_mapper/recon/system_row.hpp"
#include "oracles.hpp"

using namespace cone_mapper;
using namespace cone_mapper::recon;
using std::numbers::pi;

namespace {

// Cone at `apex` whose noiseless surface contains `target`.
ComptonCone cone_through(const Position3& apex, const Position3& target, double beta,
                         double psi = 0.3) {
  const Vec3 u = normalized(target - apex);
  const Vec3 e1 = any_orthogonal(u);
  const Vec3 e2 = cross(u, e1);
  const Vec3 w = std::cos(psi) * e1 + std::sin(psi) * e2;
  return ComptonCone(SensorPose(apex, 0, 0, 0), std::cos(beta) * u + std::sin(beta) * w, beta,
                     0.0, 0);
}

double weight_of(const SystemRow& row, CellIndex j) {
  for (std::size_t k = 0; k < row.size(); ++k)
    if (row.cells[k] == j) return row.weights[k];
  return 0.0;
}

std::vector<Viewpoint> random_viewpoints(std::uint64_t seed, std::size_t n, int agents) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-2, 12), z(1, 4), a(-pi, pi), gap(0.05, 0.5);
  std::vector<double> clock(agents, 0.0);
  std::vector<Viewpoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int id = static_cast<int>(rng() % agents);
    clock[id] += gap(rng);
    out.push_back({SensorPose({c(rng), c(rng), z(rng)}, 0, 0, a(rng)), clock[id], id});
  }
  return out;
}

}  // namespace

TEST_SUITE("recon") {

TEST_CASE("projection weight") {
  CHECK(projection_weight(0.0, 0.17) == 1.0);
  CHECK(projection_weight(3 * 0.17, 0.17) == doctest::Approx(0.011108996538242306).epsilon(1e-13));
}

TEST_CASE("system row values") {
  const auto grid = GridMap::from_extent({}, 10, 10, 1);
  const auto table = physics::LookupTable::uniform(0.3);
  ProjectionParams p;
  p.attenuation.mu = 0.01;
  const Position3 apex{0.5, 0.5, 2};

  SUBCASE("cell on the surface gets the bare kernel") {
    const CellIndex j = grid.index(6, 3);
    const auto row = system_row(cone_through(apex, grid.center(j), 0.8), grid, p, table);
    const double d = norm(grid.center(j) - apex);
    CHECK(weight_of(row, j) == doctest::Approx(std::exp(-0.01 * d) * 0.3 / (d * d)).epsilon(1e-12));
  }
  SUBCASE("inverse square along the surface") {
    // Level apex; a horizontal line through two cells at distance 2 and 4.
    const auto g = GridMap::from_extent({}, 9, 1, 1);
    const Position3 a{0.5, 0.5, 0};
    const ComptonCone c(SensorPose(a, 0, 0, 0), {0, 0, 1}, pi / 2, 0.0, 0);
    ProjectionParams q;
    q.attenuation.mu = 0.0;
    const auto row = system_row(c, g, q, table);
    CHECK(weight_of(row, 2) / weight_of(row, 4) == doctest::Approx(4.0));
    CHECK(weight_of(row, 0) == 0.0);  // apex cell
  }
  SUBCASE("band cutoff and relative threshold") {
    const auto c = cone_through(apex, grid.center(grid.index(6, 3)), 0.8);
    const auto row = system_row(c, grid, p, table);
    double mx = 0.0;
    for (double w : row.weights) mx = std::max(mx, w);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Vec3 v = grid.center(row.cells[k]) - apex;
      const double delta = std::abs(angle_between(v, c.axis()) - c.opening_angle());
      CHECK(delta <= 3 * p.sigma + 1e-12);
      CHECK(row.weights[k] >= p.eps_t * mx);
    }
    ProjectionParams open = p;
    open.band = 0.0;
    open.eps_t = 0.0;
    CHECK(system_row(c, grid, open, table).size() == grid.size());
  }
  SUBCASE("cone missing the ground yields an empty row") {
    const ComptonCone up(SensorPose(apex, 0, 0, 0), {0, 0, 1}, 0.3, 0.0, 0);
    CHECK(system_row(up, grid, p, table).empty());
    ProjectionParams no_band = p;
    no_band.band = 0.0;
    CHECK_FALSE(system_row(up, grid, no_band, table).empty());
  }
}

TEST_CASE("property: rigid rotation leaves row weights unchanged") {
  const std::size_t n = 12;
  const auto grid = GridMap::from_extent({}, 12, 12, 1);
  const auto table = physics::LookupTable::uniform(0.2);
  ProjectionParams p;
  p.band = 0.0;
  p.eps_t = 0.0;
  const Position3 ctr{6, 6, 0};
  auto rot = [&](const Vec3& v) { return Vec3{-v.y, v.x, v.z}; };  // +90 deg about z
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(0, 12), b(0.3, 1.3);
  for (int trial = 0; trial < 20; ++trial) {
    const Position3 apex{c(rng), c(rng), 2.0};
    const auto cone = cone_through(apex, {c(rng), c(rng), 0}, b(rng), c(rng));
    const Position3 apex_r = ctr + rot(apex - ctr);
    const ComptonCone cone_r(SensorPose(apex_r, 0, 0, pi / 2), rot(cone.axis()),
                             cone.opening_angle(), 0.0, 0);
    const auto r0 = system_row(cone, grid, p, table);
    const auto r1 = system_row(cone_r, grid, p, table);
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix) {
        const double w0 = weight_of(r0, grid.index(ix, iy));
        const double w1 = weight_of(r1, grid.index(n - 1 - iy, ix));
        CHECK(std::abs(w0 - w1) <= 1e-9 * std::max(1.0, std::abs(w0)));
      }
  }
}

TEST_CASE("system rows: parallel equals serial") {
  const auto grid = GridMap::from_extent({}, 20, 20, 0.5);
  const auto table = physics::build_chord_lookup({}, 36, 18, 128, 1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(0, 20), b(0.2, 1.4);
  std::vector<ComptonCone> cones;
  for (int i = 0; i < 60; ++i) cones.push_back(cone_through({c(rng), c(rng), 2}, {c(rng), c(rng), 0}, b(rng)));
  omp_set_num_threads(4);
  const auto par = system_rows(cones, grid, {}, table);
  const auto ser = system_rows_serial(cones, grid, {}, table);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].cells == ser[i].cells);
    CHECK(par[i].weights == ser[i].weights);
  }
}

TEST_CASE("sensitivity update") {
  const auto table = physics::LookupTable::uniform(0.4);
  const physics::AttenuationModel att{0.01};
  SUBCASE("one viewpoint one metre away") {
    const auto g = GridMap::from_extent({}, 1, 1, 1);
    SensitivityField s(1);
    const Viewpoint vp{SensorPose({0.5, 0.5, 1}, 0, 0, 0), 0.0, 0};
    sensitivity_update(s, std::span(&vp, 1), g, att, table, 1.0);
    CHECK(s.values[0] == doctest::Approx(0.99004983374916805 * 0.4).epsilon(1e-14));
    CHECK(s.last_timestamp.at(0) == 0.0);
  }
  SUBCASE("empty batch leaves the field alone") {
    const auto g = GridMap::from_extent({}, 3, 3, 1);
    SensitivityField s(9);
    s.values[4] = 2.0;
    const auto before = s.values;
    sensitivity_update(s, {}, g, att, table, 0.25);
    CHECK(s.values == before);
  }
  SUBCASE("gap to the same agent's previous viewpoint") {
    const auto g = GridMap::from_extent({}, 1, 1, 1);
    SensitivityField s(1);
    const std::vector<Viewpoint> vps = {{SensorPose({0.5, 0.5, 1}, 0, 0, 0), 1.0, 0},
                                        {SensorPose({0.5, 0.5, 1}, 0, 0, 0), 4.0, 0}};
    sensitivity_update(s, vps, g, att, table, 0.5);
    CHECK(s.values[0] == doctest::Approx(std::exp(-0.01) * 0.4 * (0.5 + 3.0)));
  }
  SUBCASE("out of order viewpoints rejected without side effects") {
    const auto g = GridMap::from_extent({}, 2, 2, 1);
    SensitivityField s(4);
    const std::vector<Viewpoint> vps = {{SensorPose({0, 0, 1}, 0, 0, 0), 2.0, 0},
                                        {SensorPose({1, 0, 1}, 0, 0, 0), 1.0, 0}};
    CHECK_THROWS_AS(sensitivity_update(s, vps, g, att, table, 0.25), OrderingError);
    CHECK(s.values == std::vector<double>(4, 0.0));
    CHECK(s.last_timestamp.empty());
    const Viewpoint late{SensorPose({0, 0, 1}, 0, 0, 0), 3.0, 0};
    sensitivity_update(s, std::span(&late, 1), g, att, table, 0.25);
    const Viewpoint stale{SensorPose({0, 0, 1}, 0, 0, 0), 3.0, 0};
    CHECK_THROWS_AS(sensitivity_update(s, std::span(&stale, 1), g, att, table, 0.25),
                    OrderingError);
  }
}

TEST_CASE("property: sensitivity batch splits are exact") {
  const auto g = GridMap::from_extent({}, 10, 10, 0.5);
  const auto table = physics::build_chord_lookup({}, 36, 18, 64, 2);
  const physics::AttenuationModel att{0.01};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto vps = random_viewpoints(100 + trial, 80, 3);
    SensitivityField whole(g.size()), parts(g.size()), serial(g.size());
    sensitivity_update(whole, vps, g, att, table, 0.25);
    sensitivity_update_serial(serial, vps, g, att, table, 0.25);
    std::size_t at = 0;
    while (at < vps.size()) {
      const std::size_t len = std::min<std::size_t>(vps.size() - at, rng() % 7);
      sensitivity_update(parts, std::span(vps).subspan(at, len), g, att, table, 0.25);
      at += len;
    }
    CHECK(whole.values == parts.values);
    CHECK(whole.values == serial.values);
    CHECK(whole.last_timestamp == parts.last_timestamp);
  }
}

TEST_CASE("property: sensitivity never decreases") {
  const auto g = GridMap::from_extent({}, 6, 6, 1);
  const auto table = physics::LookupTable::uniform(0.1);
  const auto vps = random_viewpoints(3, 60, 2);
  SensitivityField s(g.size());
  for (std::size_t i = 0; i < vps.size(); ++i) {
    const auto before = s.values;
    sensitivity_update(s, std::span(vps).subspan(i, 1), g, {0.01}, table, 0.25);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(s.values[j] >= before[j]);
  }
}

TEST_CASE("mlem examples") {
  SUBCASE("single cell collapses to I / s") {
    SensitivityField s(1);
    s.values[0] = 3.5;
    std::vector<SystemRow> rows(7, SystemRow{{0}, {0.25}});
    for (double init : {1e-6, 1.0, 42.0}) {
      LambdaField l0;
      l0.values = {init};
      CHECK(mlem(l0, rows, s, 1).lambda.values[0] == 7.0 / 3.5);
    }
  }
  SUBCASE("symmetric cells stay equal") {
    SensitivityField s(2);
    s.values = {2.0, 2.0};
    const std::vector<SystemRow> rows{{{0, 1}, {0.7, 0.7}}};
    const auto r = mlem(uniform_init(s), rows, s, 25);
    CHECK(r.lambda.values[0] == r.lambda.values[1]);
    CHECK(r.lambda.iteration == 25);
  }
  SUBCASE("unobserved cells are frozen at zero") {
    SensitivityField s(3);
    s.values = {1.0, 0.0, 2.0};
    const std::vector<SystemRow> rows{{{0, 1, 2}, {1.0, 5.0, 1.0}}};
    const auto r = mlem(uniform_init(s), rows, s, 5);
    CHECK(r.lambda.values[1] == 0.0);
    CHECK(s.values[0] * r.lambda.values[0] + s.values[2] * r.lambda.values[2] ==
          doctest::Approx(1.0));
  }
  SUBCASE("rows with zero forward projection are skipped and counted") {
    SensitivityField s(3);
    s.values = {1.0, 0.0, 1.0};
    const std::vector<SystemRow> rows{{{0}, {1.0}}, {{1}, {1.0}}};
    const auto r = mlem(uniform_init(s), rows, s, 3);
    CHECK(r.skipped_rows_last_iteration == 1);
    CHECK(r.skipped_row_evaluations == 3);
  }
  SUBCASE("argument errors") {
    SensitivityField s(2);
    s.values = {1, 1};
    CHECK_THROWS_AS(mlem(uniform_init(s), {}, s, 1), ConfigError);
    const std::vector<SystemRow> rows{{{0}, {1.0}}};
    CHECK_THROWS_AS(mlem(uniform_init(s), rows, s, 0), ConfigError);
    const std::vector<SystemRow> bad{{{5}, {1.0}}};
    CHECK_THROWS_AS(mlem(uniform_init(s), bad, s, 1), ConfigError);
  }
}

TEST_CASE("property: mlem conserves counts, ascends, stays non-negative") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = oracle::random_mlem_instance(seed, 400, 200);
    LambdaField l = inst.init;
    long double ll = oracle::log_likelihood(inst, l.values);
    for (int it = 0; it < 10; ++it) {
      l = mlem(l, inst.rows, inst.sensitivity, 1).lambda;
      long double total = 0.0L;
      for (std::size_t j = 0; j < l.values.size(); ++j) {
        CHECK(l.values[j] >= 0.0);
        total += inst.sensitivity.values[j] * l.values[j];
      }
      CHECK(std::abs(static_cast<double>(total) / inst.rows.size() - 1.0) < 1e-9);
      const long double next = oracle::log_likelihood(inst, l.values);
      CHECK(next >= ll - 1e-9L * std::abs(ll));
      ll = next;
    }
  }
}

TEST_CASE("mlem: parallel equals serial, bit for bit") {
  omp_set_num_threads(4);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto inst = oracle::random_mlem_instance(seed, 400, 200);
    const auto a = mlem(inst.init, inst.rows, inst.sensitivity, 10);
    const auto b = mlem_serial(inst.init, inst.rows, inst.sensitivity, 10);
    CHECK(a.lambda.values == b.lambda.values);
  }
}

TEST_CASE("log likelihood matches the reference") {
  const auto inst = oracle::random_mlem_instance(7, 50, 30);
  const double ll = log_likelihood(inst.rows, inst.sensitivity, inst.init);
  CHECK(ll == doctest::Approx(static_cast<double>(oracle::log_likelihood(inst, inst.init.values))));
}

TEST_CASE("local maxima") {
  const auto g = GridMap::from_extent({}, 20, 20, 1);
  LambdaField l;
  SUBCASE("uniform field has none") {
    l.values.assign(g.size(), 1.0);
    const auto m = local_maxima(l, g, 5);
    CHECK(m.peaks.empty());
    CHECK(m.incomplete);
  }
  SUBCASE("single peak") {
    l.values.assign(g.size(), 1.0);
    l.values[g.index(4, 7)] = 2.0;
    const auto m = local_maxima(l, g, 1);
    REQUIRE(m.peaks.size() == 1);
    CHECK(m.peaks[0].cell == g.index(4, 7));
    CHECK_FALSE(m.incomplete);
  }
  SUBCASE("two gaussians") {
    l.values.resize(g.size());
    for (CellIndex j = 0; j < g.size(); ++j) {
      const auto c = g.center(j);
      l.values[j] = 3 * std::exp(-((c.x - 5.5) * (c.x - 5.5) + (c.y - 4.5) * (c.y - 4.5)) / 8) +
                    2 * std::exp(-((c.x - 14.5) * (c.x - 14.5) + (c.y - 15.5) * (c.y - 15.5)) / 8);
    }
    // Exhaustive scan for strict maxima.
    std::vector<CellIndex> brute;
    for (CellIndex j = 0; j < g.size(); ++j) {
      bool strict = true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const long x = static_cast<long>(g.ix(j)) + dx, y = static_cast<long>(g.iy(j)) + dy;
          if ((dx || dy) && x >= 0 && y >= 0 && x < 20 && y < 20 &&
              l.values[g.index(x, y)] >= l.values[j])
            strict = false;
        }
      if (strict) brute.push_back(j);
    }
    REQUIRE(brute.size() == 2);
    const auto m = local_maxima(l, g, 2);
    REQUIRE(m.peaks.size() == 2);
    CHECK(m.peaks[0].cell == g.index(5, 4));
    CHECK(m.peaks[1].cell == g.index(14, 15));
    CHECK(m.peaks[0].position == g.center(g.index(5, 4)));
    // Scale invariance.
    LambdaField scaled = l;
    for (double& v : scaled.values) v *= 1e-7;
    const auto ms = local_maxima(scaled, g, 2);
    CHECK(ms.peaks[0].cell == m.peaks[0].cell);
    CHECK(ms.peaks[1].cell == m.peaks[1].cell);
    // Sensitivity gate.
    SensitivityField s(g.size());
    s.values[g.index(5, 4)] = 10.0;
    const auto gated = local_maxima(l, g, 2, &s, 5.0);
    REQUIRE(gated.peaks.size() == 1);
    CHECK(gated.peaks[0].cell == g.index(14, 15));
    CHECK(gated.incomplete);
  }
  SUBCASE("equal peaks ordered by cell index") {
    l.values.assign(g.size(), 0.0);
    l.values[g.index(15, 15)] = 1.0;
    l.values[g.index(2, 2)] = 1.0;
    const auto m = local_maxima(l, g, 2);
    REQUIRE(m.peaks.size() == 2);
    CHECK(m.peaks[0].cell == g.index(2, 2));
  }
  SUBCASE("errors") {
    l.values.assign(g.size(), 0.0);
    CHECK_THROWS_AS(local_maxima(l, g, 0), ConfigError);
    l.values.resize(3);
    CHECK_THROWS_AS(local_maxima(l, g, 1), ConfigError);
  }
}

TEST_CASE("localization metrics") {
  SUBCASE("exact estimates") {
    const std::vector<Position3> s{{1, 1, 0}, {5, 5, 0}};
    const auto m = localization_metrics(s, s);
    CHECK(m.rmse == 0.0);
    CHECK(m.n_localized == 2);
  }
  SUBCASE("nearest of two") {
    const std::vector<Position3> src{{0, 0, 0}};
    const std::vector<Position3> est{{3, 4, 0}, {1, 0, 0}};
    const auto m = localization_metrics(est, src);
    CHECK(m.per_source_error[0] == 1.0);
    CHECK(m.rmse == 1.0);
  }
  SUBCASE("five of five") {
    const std::vector<Position3> s{{1, 1, 0}, {5, 5, 0}, {9, 1, 0}, {1, 9, 0}, {9, 9, 0}};
    CHECK(localization_metrics(s, s).n_localized == 5);
  }
  SUBCASE("tolerance is strict") {
    const std::vector<Position3> src{{0, 0, 0}};
    const std::vector<Position3> est{{2, 0, 0}};
    CHECK(localization_metrics(est, src, 2.0).n_localized == 0);
    CHECK(localization_metrics(est, src, 2.5).n_localized == 1);
  }
  SUBCASE("no estimates") {
    const std::vector<Position3> src{{0, 0, 0}};
    const auto m = localization_metrics({}, src);
    CHECK(std::isinf(m.per_source_error[0]));
    CHECK_FALSE(m.rmse_defined);
    CHECK(std::isnan(m.rmse));
  }
  SUBCASE("no sources") { CHECK_THROWS_AS(localization_metrics({}, {}), ConfigError); }
}

TEST_CASE("field dump round trip") {
  const auto g = GridMap::from_extent({-1, 2, 0}, 3, 2, 0.5);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 3);
  std::stringstream ss;
  write_field(ss, g, v);
  const auto d = read_field(ss);
  CHECK(d.nx == 6);
  CHECK(d.ny == 4);
  CHECK(d.resolution == 0.5);
  CHECK(d.origin_x == -1);
  CHECK(d.values == v);
  std::istringstream bad("grid 2 1 1 0 0\n0.5\n");
  CHECK_THROWS_AS(read_field(bad), ParseError);
  CHECK_THROWS_AS(write_field(ss, g, {1.0}), ConfigError);
}

}  // TEST_SUITE
