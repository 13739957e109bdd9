#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/strategy/config.hpp"
#include "cone_mapper/strategy/kmeans.hpp"
#include "cone_mapper/strategy/planner.hpp"
#include "cone_mapper/strategy/tsp.hpp"
#include "cone_mapper/strategy/waypoints.hpp"
#include "cone_mapper/strategy/zigzag.hpp"
#include "oracles.hpp"

using namespace cone_mapper;
using namespace cone_mapper::strategy;

namespace {

std::vector<Position3> random_points(std::mt19937_64& rng, std::size_t n, double lo = 0,
                                     double hi = 50) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Position3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), 0};
  return pts;
}

double segment_distance(const Position3& p, const Position3& a, const Position3& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

StrategyConfig test_config() {
  StrategyConfig c;
  c.s_min = 1.0;
  c.s_max = 10.0;
  return c;
}

}  // namespace

TEST_SUITE("strategy") {

// ---- k-means -------------------------------------------------------------

TEST_CASE("cluster_exploration basics") {
  std::mt19937_64 rng(1);
  const auto pts = random_points(rng, 6);
  SUBCASE("k = |points| returns the points") {
    CHECK(cluster_exploration(pts, 6, 3) == pts);
    CHECK(cluster_exploration(pts, 9, 3) == pts);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cluster_exploration({}, 2, 1), ConfigError);
    CHECK_THROWS_AS(cluster_exploration(pts, 0, 1), ConfigError);
  }
  SUBCASE("representatives are members") {
    const auto many = random_points(rng, 80);
    for (const auto& c : cluster_exploration(many, 5, 11))
      CHECK(std::find(many.begin(), many.end(), c) != many.end());
  }
  SUBCASE("deterministic for a seed") {
    const auto many = random_points(rng, 80);
    CHECK(cluster_exploration(many, 5, 11) == cluster_exploration(many, 5, 11));
  }
}

TEST_CASE("two separated blobs give one representative each") {
  std::mt19937_64 rng(2);
  auto a = random_points(rng, 20, 0, 3);
  const auto b = random_points(rng, 20, 40, 43);
  a.insert(a.end(), b.begin(), b.end());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto reps = cluster_exploration(a, 2, seed);
    REQUIRE(reps.size() == 2);
    const int low = (reps[0].x < 10) + (reps[1].x < 10);
    CHECK(low == 1);
  }
}

TEST_CASE("k-means beats random assignment") {
  std::mt19937_64 rng(3);
  const auto pts = random_points(rng, 100);
  const auto cl = kmeans(pts, 4, 17);
  const double ss = within_cluster_ss(pts, cl.centroids, cl.assignment);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> assign(pts.size());
    for (auto& a : assign) a = rng() % 4;
    std::vector<Position3> cent(4);
    std::vector<int> cnt(4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cent[assign[i]] += pts[i];
      ++cnt[assign[i]];
    }
    for (int c = 0; c < 4; ++c) cent[c] *= 1.0 / std::max(cnt[c], 1);
    CHECK(ss <= within_cluster_ss(pts, cent, assign));
  }
}

TEST_CASE("k-means against the exhaustive 2-partition oracle") {
  std::mt19937_64 rng(4);
  int optimal = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto pts = random_points(rng, 3 + trial % 6);
    const auto cl = kmeans(pts, 2, trial);
    const double ss = within_cluster_ss(pts, cl.centroids, cl.assignment);
    const double best = oracle::best_two_partition_ss(pts);
    CHECK(ss >= best * (1 - 1e-12));
    if (ss <= best * (1 + 1e-9)) ++optimal;
    // Lloyd fixpoint: every point sits with its nearest centroid.
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (const auto& c : cl.centroids)
        CHECK(planar_distance2(pts[i], cl.centroids[cl.assignment[i]]) <=
              planar_distance2(pts[i], c) + 1e-9);
  }
  // Single seeded start, so local optima happen.
  MESSAGE("k-means optimal in " << optimal << " / " << trials);
  CHECK(optimal >= trials / 2);
}

TEST_CASE("assign_to_agents") {
  SUBCASE("one agent takes everything") {
    std::mt19937_64 rng(5);
    const auto wp = random_points(rng, 7);
    const std::vector<Position3> agents{{0, 0, 0}};
    const auto parts = assign_to_agents(wp, agents);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].size() == 7);
  }
  SUBCASE("two distant agents split by proximity") {
    const std::vector<Position3> wp{{1, 1, 0}, {2, 0, 0}, {48, 49, 0}, {49, 47, 0}};
    const std::vector<Position3> agents{{50, 50, 0}, {0, 0, 0}};
    const auto parts = assign_to_agents(wp, agents);
    CHECK(parts[0] == std::vector<std::size_t>{2, 3});
    CHECK(parts[1] == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("three blobs, three agents") {
    const std::vector<Position3> wp{{1, 1, 0},   {2, 1, 0},   {1, 2, 0},  {25, 40, 0}, {26, 41, 0},
                                    {24, 41, 0}, {45, 2, 0}, {46, 3, 0}, {44, 1, 0}};
    const std::vector<Position3> agents{{40, 0, 0}, {0, 5, 0}, {25, 30, 0}};
    const auto parts = assign_to_agents(wp, agents);
    CHECK(parts[0] == std::vector<std::size_t>{6, 7, 8});
    CHECK(parts[1] == std::vector<std::size_t>{0, 1, 2});
    CHECK(parts[2] == std::vector<std::size_t>{3, 4, 5});
  }
  SUBCASE("no waypoints") {
    const std::vector<Position3> agents{{0, 0, 0}, {1, 1, 0}};
    const auto parts = assign_to_agents({}, agents);
    CHECK(parts.size() == 2);
    CHECK(parts[0].empty());
  }
  SUBCASE("no agents") {
    const std::vector<Position3> wp{{1, 1, 0}};
    CHECK_THROWS_AS(assign_to_agents(wp, {}), ConfigError);
  }
}

// ---- sequencing ----------------------------------------------------------

TEST_CASE("sequence edge cases") {
  const Position3 start{0, 0, 0};
  CHECK(sequence({}, start).empty());
  const std::vector<Position3> one{{3, 3, 0}};
  CHECK(sequence(one, start) == std::vector<std::size_t>{0});
  const std::vector<Position3> line{{1, 0, 0}, {2, 0, 0}, {3.5, 0, 0}, {7, 0, 0}};
  CHECK(sequence(line, start) == std::vector<std::size_t>{0, 1, 2, 3});
  std::mt19937_64 rng(6);
  const auto too_many = random_points(rng, kMaxSequenceLength + 1);
  CHECK_THROWS_AS(sequence(too_many, start), ConfigError);
  CHECK_NOTHROW(sequence(std::span(too_many).first(kMaxSequenceLength), start));
}

TEST_CASE("sequence against the brute-force optimum") {
  std::mt19937_64 rng(7);
  int optimal = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto pts = random_points(rng, 2 + trial % 7);
    const Position3 start = random_points(rng, 1)[0];
    const auto order = sequence(pts, start);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> all(pts.size());
    std::iota(all.begin(), all.end(), 0);
    REQUIRE(sorted == all);
    const double c = path_cost(start, pts, order);
    const double best = oracle::best_open_path(pts, start);
    CHECK(c <= best * 1.05);
    if (c <= best * (1 + 1e-9)) ++optimal;
  }
  MESSAGE("sequence optimal in " << optimal << " / " << trials);
  CHECK(optimal >= trials * 9 / 10);
}

TEST_CASE("property: improvement never loses to nearest neighbour") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_points(rng, 5 + trial % 40);
    const Position3 start{25, 0, 0};
    const auto nn = nearest_neighbor_order(pts, start);
    auto two = nn;
    two_opt(pts, start, two);
    CHECK(path_cost(start, pts, two) <= path_cost(start, pts, nn) + 1e-9);
    auto both = two;
    or_opt(pts, start, both);
    CHECK(path_cost(start, pts, both) <= path_cost(start, pts, two) + 1e-9);
    CHECK(path_cost(start, pts, sequence(pts, start)) <= path_cost(start, pts, nn) + 1e-9);
  }
}

// ---- planning ------------------------------------------------------------

TEST_CASE("planner examples") {
  const auto g = GridMap::from_extent({}, 10, 10, 1);
  SUBCASE("start equals goal") {
    const std::vector<CellIndex> starts{g.index(3, 3)};
    const auto plan = plan_paths({{g.index(3, 3)}}, g, starts);
    CHECK(plan.agents[0].path == std::vector<CellIndex>{g.index(3, 3)});
    CHECK(plan.agents[0].reached.size() == 1);
  }
  SUBCASE("open grid leg is Chebyshev-shortest") {
    const std::vector<CellIndex> starts{g.index(0, 0)};
    const auto plan = plan_paths({{g.index(7, 3)}}, g, starts);
    CHECK(plan.agents[0].path.size() - 1 == 7);
    CHECK(plan.agents[0].path.back() == g.index(7, 3));
  }
  SUBCASE("head-on crossing") {
    const auto corridor = GridMap::from_extent({}, 10, 3, 1);
    const std::vector<CellIndex> starts{corridor.index(0, 1), corridor.index(9, 1)};
    const auto plan = plan_paths({{corridor.index(8, 1)}, {corridor.index(1, 1)}}, corridor, starts);
    CHECK(plan.agents[0].skipped.empty());
    CHECK(plan.agents[1].skipped.empty());
    const auto r = oracle::scan_conflicts(corridor, {plan.agents[0].path, plan.agents[1].path});
    CHECK(r.vertex == 0);
    CHECK(r.swap == 0);
    CHECK(r.jumps == 0);
    CHECK(plan.agents[1].path.back() == corridor.index(1, 1));
  }
  SUBCASE("unreachable waypoint is skipped and reported") {
    PlannerOptions opt;
    opt.blocked.assign(g.size(), false);
    for (std::size_t y = 0; y < 10; ++y) opt.blocked[g.index(5, y)] = true;
    const std::vector<CellIndex> starts{g.index(1, 1)};
    const auto plan = plan_paths({{g.index(8, 8), g.index(3, 7)}}, g, starts, opt);
    CHECK(plan.agents[0].skipped == std::vector<CellIndex>{g.index(8, 8)});
    CHECK(plan.agents[0].reached == std::vector<CellIndex>{g.index(3, 7)});
    for (CellIndex c : plan.agents[0].path) CHECK_FALSE(opt.blocked[c]);
  }
  SUBCASE("argument errors") {
    const std::vector<CellIndex> starts{0};
    CHECK_THROWS_AS(plan_paths({{0}, {1}}, g, starts), ConfigError);
    CHECK_THROWS_AS(plan_paths({{1000}}, g, starts), ConfigError);
  }
}

TEST_CASE("property: planned paths are conflict-free") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = GridMap::from_extent({}, 8 + trial % 8, 8 + trial % 5, 1);
    std::vector<CellIndex> cells(g.size());
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    const std::vector<CellIndex> starts(cells.begin(), cells.begin() + 3);
    std::vector<std::vector<CellIndex>> seqs(3);
    for (auto& s : seqs)
      for (std::size_t k = 0, n = 1 + rng() % 5; k < n; ++k) s.push_back(rng() % g.size());
    const auto plan = plan_paths(seqs, g, starts);
    std::vector<std::vector<CellIndex>> paths;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto& ap = plan.agents[a];
      CHECK(ap.path.front() == starts[a]);
      CHECK(ap.reached.size() + ap.skipped.size() == seqs[a].size());
      // Reached waypoints appear along the path in order.
      std::size_t at = 0;
      for (CellIndex w : ap.reached) {
        while (at < ap.path.size() && ap.path[at] != w) ++at;
        CHECK(at < ap.path.size());
      }
      paths.push_back(ap.path);
    }
    const auto r = oracle::scan_conflicts(g, paths);
    CHECK(r.vertex == 0);
    CHECK(r.swap == 0);
    CHECK(r.jumps == 0);
  }
}

// ---- zigzag --------------------------------------------------------------

TEST_CASE("zigzag layout") {
  SUBCASE("three strips of nine lines") {
    const auto z = zigzag({{0, 0, 0}, 50, 50}, 2.0, 3);
    REQUIRE(z.size() == 3);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(z[a].size() == 18);
      CHECK(z[a].front().x == doctest::Approx(a * 50.0 / 3));
      for (const auto& p : z[a]) {
        CHECK(p.x >= a * 50.0 / 3 - 1e-9);
        CHECK(p.x <= (a + 1) * 50.0 / 3 + 1e-9);
      }
    }
  }
  SUBCASE("step equal to the width gives both edges") {
    const auto z = zigzag({{0, 0, 0}, 10, 20}, 10.0, 1);
    REQUIRE(z[0].size() == 4);
    CHECK(z[0][0].x == 0.0);
    CHECK(z[0][2].x == 10.0);
  }
  SUBCASE("step wider than the strip gives one center line") {
    const auto z = zigzag({{0, 0, 0}, 10, 20}, 15.0, 2);
    CHECK(z[0].size() == 2);
    CHECK(z[0][0].x == doctest::Approx(2.5));
    CHECK(z[1][0].x == doctest::Approx(7.5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(zigzag({{0, 0, 0}, 10, 10}, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(zigzag({{0, 0, 0}, 10, 10}, 1.0, 0), ConfigError);
  }
  SUBCASE("polyline length") {
    CHECK(polyline_length({{0, 0, 0}, {3, 4, 7}, {3, 0, 0}}) == doctest::Approx(9.0));
  }
}

TEST_CASE("property: zigzag covers every cell within step / sqrt 2") {
  for (double step : {1.0, 2.0, 3.0}) {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
      const auto g = GridMap::from_extent({5, -2, 0}, 30, 20, 0.5);
      const auto z = zigzag({g.origin(), 30, 20}, step, n);
      for (CellIndex j = 0; j < g.size(); ++j) {
        double best = 1e9;
        for (const auto& poly : z)
          for (std::size_t i = 1; i < poly.size(); ++i)
            best = std::min(best, segment_distance(g.center(j), poly[i - 1], poly[i]));
        CHECK(best <= step / std::sqrt(2.0) + 1e-9);
      }
    }
  }
}

// ---- waypoints -----------------------------------------------------------

TEST_CASE("waypoint generation") {
  const auto g = GridMap::from_extent({}, 20, 20, 1);
  recon::LambdaField lambda;
  lambda.values.assign(g.size(), 1.0);
  recon::SensitivityField s(g.size());
  const auto cfg = test_config();

  SUBCASE("explored and flat: nothing to do") {
    std::fill(s.values.begin(), s.values.end(), 2.0);
    CHECK(generate_waypoints(lambda, s, g, cfg).empty());
  }
  SUBCASE("fresh mission is pure exploration over the whole grid") {
    const auto w = generate_waypoints(lambda, s, g, cfg, {}, 0.0, 1);
    CHECK(w.count(WaypointKind::exploitation) == 0);
    CHECK(w.size() >= cfg.k_explore - 2);
    CHECK(w.size() <= cfg.k_explore);
    int quad[4] = {};
    for (const auto& p : w.positions()) ++quad[(p.x > 10) + 2 * (p.y > 10)];
    for (int q : quad) CHECK(q >= 1);
  }
  SUBCASE("well observed peak is not exploited") {
    std::fill(s.values.begin(), s.values.end(), 2.0);
    lambda.values[g.index(5, 5)] = 9.0;
    lambda.values[g.index(15, 12)] = 7.0;
    s.values[g.index(5, 5)] = 11.0;
    const auto w = generate_waypoints(lambda, s, g, cfg);
    REQUIRE(w.size() == 1);
    CHECK(w.waypoints[0].cell == g.index(15, 12));
    CHECK(w.waypoints[0].kind == WaypointKind::exploitation);
    CHECK(w.waypoints[0].position == g.center(g.index(15, 12)));
  }
  SUBCASE("exploitation cap keeps the strongest") {
    std::fill(s.values.begin(), s.values.end(), 2.0);
    for (int k = 0; k < 5; ++k) lambda.values[g.index(2 + 4 * k, 3)] = 2.0 + k;
    auto capped = cfg;
    capped.max_exploitation = 2;
    const auto w = generate_waypoints(lambda, s, g, capped);
    REQUIRE(w.size() == 2);
    CHECK(w.waypoints[0].cell == g.index(18, 3));
    CHECK(w.waypoints[1].cell == g.index(14, 3));
  }
  SUBCASE("recently visited waypoints are filtered") {
    std::fill(s.values.begin(), s.values.end(), 2.0);
    lambda.values[g.index(5, 5)] = 9.0;
    const Position3 near = g.center(g.index(6, 6));
    const std::vector<VisitRecord> recent{{95.0, near}};
    const auto w = generate_waypoints(lambda, s, g, cfg, recent, 100.0);
    CHECK(w.empty());
    CHECK(w.n_filtered == 1);
    const std::vector<VisitRecord> old{{10.0, near}};
    CHECK(generate_waypoints(lambda, s, g, cfg, old, 100.0).size() == 1);
    const std::vector<VisitRecord> far{{99.0, g.center(g.index(15, 15))}};
    CHECK(generate_waypoints(lambda, s, g, cfg, far, 100.0).size() == 1);
  }
  SUBCASE("bad inputs") {
    auto bad = cfg;
    bad.s_max = 0.5;
    CHECK_THROWS_AS(generate_waypoints(lambda, s, g, bad), ConfigError);
    recon::SensitivityField small(3);
    CHECK_THROWS_AS(generate_waypoints(lambda, small, g, cfg), ConfigError);
  }
}

TEST_CASE("property: waypoints are distinct cell centers at least two cells apart") {
  const auto g = GridMap::from_extent({}, 25, 25, 1);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    recon::LambdaField lambda;
    recon::SensitivityField s(g.size());
    lambda.values.resize(g.size());
    for (auto& v : lambda.values) v = u(rng);
    for (auto& v : s.values) v = 3 * u(rng);
    auto cfg = test_config();
    cfg.s_max = 2.0;
    const auto w = generate_waypoints(lambda, s, g, cfg, {}, 0.0, trial);
    for (std::size_t a = 0; a < w.size(); ++a) {
      const auto& wa = w.waypoints[a];
      CHECK(wa.position == g.center(wa.cell));
      if (wa.kind == WaypointKind::exploitation) CHECK(s.values[wa.cell] < cfg.s_max);
      for (std::size_t b = a + 1; b < w.size(); ++b)
        CHECK(cell_distance(g, wa.cell, w.waypoints[b].cell) >= 2);
    }
  }
}

TEST_CASE("single pass sensitivity") {
  const auto table = physics::LookupTable::uniform(0.5);
  const physics::AttenuationModel vacuum{0.0};
  // Straight pass at distance h: integral of L / (h^2 + x^2) dx / v over the pass.
  const double h = std::hypot(2.0, 3.0), v = 8.0, half = 10.0;
  const double exact = 0.5 / v * 2 * std::atan(half / h) / h;
  const double got = single_pass_sensitivity(table, vacuum, 2.0, 3.0, v, 0.01, 2 * half);
  CHECK(got == doctest::Approx(exact).epsilon(0.01));
  CHECK(single_pass_sensitivity(table, {0.01}, 2.0, 3.0, v, 0.25, 20) <
        single_pass_sensitivity(table, vacuum, 2.0, 3.0, v, 0.25, 20));
}

}  // TEST_SUITE
