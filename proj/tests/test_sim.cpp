#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/detector.hpp"
#include "cone_mapper/physics/kernel.hpp"
#include "cone_mapper/sim/agent.hpp"
#include "cone_mapper/sim/logs.hpp"
#include "cone_mapper/sim/synthesis.hpp"
#include "cone_mapper/sim/world.hpp"

using namespace cone_mapper;
using namespace cone_mapper::sim;
using std::numbers::pi;

namespace {

AgentState agent_at(const Position3& p, int id = 0) {
  AgentState a;
  a.id = id;
  a.pose = SensorPose(p, 0, 0, 0);
  return a;
}

const physics::LookupTable& default_table() {
  static const auto t = physics::build_chord_lookup({}, 36, 18, 4096, 20240611);
  return t;
}

std::size_t count_cones(double dt, std::size_t steps, std::uint64_t seed) {
  SimParams p;
  p.seed = seed;
  p.noise.background_rate = 0.0;
  p.noise.p_ambiguous = 0.0;
  World w(GridMap::from_extent({}, 10, 10, 1), {{{5, 5, 0}, 2e9}}, {agent_at({2, 1, 2})},
          default_table(), p);
  std::size_t n = 0;
  for (std::size_t i = 0; i < steps; ++i) n += w.step(dt).cones.size();
  return n;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("agent kinematics") {
  SUBCASE("path at the current position") {
    auto a = agent_at({1, 2, 2});
    a.set_path({{1, 2, 2}});
    const auto b = advance_agent(a, 0.5);
    CHECK(b.pose == a.pose);
    CHECK(b.idle());
  }
  SUBCASE("straight segment") {
    auto a = agent_at({0, 0, 2});
    a.set_path({{8, 0, 2}});
    const auto b = advance_agent(a, 0.5);
    CHECK(b.pose.position().x == doctest::Approx(4.0));
    CHECK_FALSE(b.idle());
  }
  SUBCASE("leftover budget carries over a waypoint") {
    auto a = agent_at({0, 0, 2});
    a.set_path({{3, 0, 2}, {3, 4, 2}});
    const auto b = advance_agent(a, 0.5);
    CHECK(b.pose.position().x == doctest::Approx(3.0));
    CHECK(b.pose.position().y == doctest::Approx(1.0));
    CHECK(b.pose.yaw() == doctest::Approx(pi / 2));
    CHECK(b.next == 1);
  }
  SUBCASE("commanded speed is capped") {
    auto a = agent_at({0, 0, 2});
    a.speed = 4;
    a.set_path({{100, 0, 2}});
    CHECK(advance_agent(a, 1.0).pose.position().x == doctest::Approx(4.0));
  }
  SUBCASE("idle agent hovers") {
    const auto a = agent_at({3, 3, 2});
    CHECK(advance_agent(a, 1.0).pose == a.pose);
  }
  SUBCASE("bad parameters") {
    auto a = agent_at({0, 0, 2});
    CHECK_THROWS_AS(advance_agent(a, 0.0), ConfigError);
    a.speed = 10;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a.speed = 8;
    a.flight_height = 0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
  }
}

TEST_CASE("property: agents never exceed max speed") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(0, 30), dt(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = agent_at({c(rng), c(rng), 2});
    std::vector<Position3> path;
    for (int k = 0; k < 6; ++k) path.push_back({c(rng), c(rng), 2});
    a.set_path(path);
    while (!a.idle()) {
      const double h = dt(rng);
      const auto b = advance_agent(a, h);
      CHECK(norm(b.pose.position() - a.pose.position()) / h <= a.max_speed + 1e-9);
      a = b;
    }
  }
}

TEST_CASE("noiseless cones contain the source direction") {
  NoiseSpec n;
  n.sigma = 0.0;
  n.p_ambiguous = 0.0;
  Rng rng(5);
  const SensorPose pose({1, 2, 2}, 0.1, -0.2, 0.7);
  const Position3 src{7, -3, 0};
  const Vec3 u = normalized(src - pose.position());
  double sum = 0.0, sum2 = 0.0;
  const int N = 10000;
  for (int i = 0; i < N; ++i) {
    const auto cones = synthesize_cone(src, pose, n, rng, 1.0, 3);
    REQUIRE(cones.size() == 1);
    const auto& c = cones[0];
    const double err = angle_between(c.axis(), u) - c.opening_angle();
    CHECK(std::abs(err) < 1e-9);
    CHECK(c.opening_angle() >= n.beta_min);
    CHECK(c.opening_angle() <= n.beta_max);
    CHECK(c.agent_id() == 3);
    CHECK(c.apex_pose() == pose);
    sum += err;
    sum2 += err * err;
  }
  CHECK(std::abs(sum / N) < 1e-10);
  CHECK(sum2 / N < 1e-18);
}

TEST_CASE("angle noise has the configured spread") {
  NoiseSpec n;
  n.sigma = 0.1;
  n.p_ambiguous = 0.0;
  Rng rng(6);
  const SensorPose pose({0, 0, 2}, 0, 0, 0);
  const Position3 src{4, 3, 0};
  const Vec3 u = normalized(src - pose.position());
  double sum = 0, sum2 = 0;
  const int N = 10000;
  for (int i = 0; i < N; ++i) {
    const auto c = synthesize_cone(src, pose, n, rng, 0.0, 0)[0];
    const double e = angle_between(c.axis(), u) - c.opening_angle();
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / N;
  const double sd = std::sqrt(sum2 / N - mean * mean);
  MESSAGE("angle noise sd = " << sd);
  CHECK(sd == doctest::Approx(0.1).epsilon(0.05));
  CHECK(std::abs(mean) < 0.005);
}

TEST_CASE("ambiguity produces a second cone with the same angle") {
  NoiseSpec n;
  n.p_ambiguous = 1.0;
  Rng rng(8);
  const auto cones = synthesize_cone({5, 5, 0}, SensorPose({0, 0, 2}, 0, 0, 0), n, rng, 0, 0);
  REQUIRE(cones.size() == 2);
  CHECK(cones[0].opening_angle() == cones[1].opening_angle());
  n.p_ambiguous = 0.0;
  std::size_t total = 0;
  for (int i = 0; i < 200; ++i)
    total += synthesize_cone({5, 5, 0}, SensorPose({0, 0, 2}, 0, 0, 0), n, rng, 0, 0).size();
  CHECK(total == 200);
  CHECK_THROWS_AS(synthesize_cone({0, 0, 2}, SensorPose({0, 0, 2}, 0, 0, 0), n, rng, 0, 0),
                  GeometryError);
}

TEST_CASE("background axes are uniform on the sphere") {
  NoiseSpec n;
  Rng rng(12);
  const int N = 10000;
  std::vector<double> z;
  for (int i = 0; i < N; ++i) {
    const auto c = background_cone(SensorPose({0, 0, 2}, 0, 0, 0), n, rng, 0, 0);
    z.push_back(c.axis().z);
    CHECK(c.opening_angle() >= n.beta_min);
    CHECK(c.opening_angle() <= n.beta_max);
  }
  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (int i = 0; i < N; ++i) {
    const double f = (z[i] + 1) / 2;
    ks = std::max({ks, std::abs(f - double(i) / N), std::abs(f - double(i + 1) / N)});
  }
  MESSAGE("KS statistic " << ks);
  CHECK(ks < 1.628 / std::sqrt(double(N)));  // 1% critical value
}

TEST_CASE("noise spec validation") {
  NoiseSpec n;
  n.p_ambiguous = 1.5;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  n = NoiseSpec{};
  n.beta_min = 1.5;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  n = NoiseSpec{};
  n.background_rate = -1;
  CHECK_THROWS_AS(n.validate(), ConfigError);
}

TEST_CASE("world stepping") {
  const auto grid = GridMap::from_extent({}, 20, 20, 1);
  SUBCASE("no sources and no background: no cones") {
    SimParams p;
    p.noise.background_rate = 0.0;
    World w(grid, {}, {agent_at({5, 5, 2}), agent_at({6, 5, 2}, 1)}, default_table(), p);
    for (int i = 0; i < 400; ++i) {
      const auto out = w.step(0.25);
      CHECK(out.cones.empty());
      REQUIRE(out.viewpoints.size() == 2);
      CHECK(out.viewpoints[0].timestamp == w.clock());
    }
    CHECK(w.clock() == doctest::Approx(100.0));
  }
  SUBCASE("background count over 240 s") {
    SimParams p;
    World w(grid, {}, {agent_at({5, 5, 2})}, default_table(), p);
    std::size_t n = 0;
    for (int i = 0; i < 960; ++i) n += w.step(0.25).background_cones;
    MESSAGE("background cones in 240 s: " << n);
    CHECK(std::abs(double(n) - 60.0) < 4 * std::sqrt(60.0));
  }
  SUBCASE("halving dt keeps the expected count") {
    double a = 0, b = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      a += double(count_cones(0.5, 400, s));
      b += double(count_cones(0.25, 800, s + 100));
    }
    MESSAGE("cones: dt 0.5 -> " << a << ", dt 0.25 -> " << b);
    CHECK(std::abs(a - b) < 4 * std::sqrt(a + b));
  }
  SUBCASE("dispatch lifts waypoints to flight height") {
    World w(grid, {}, {agent_at({1, 1, 2})}, default_table(), SimParams{});
    w.dispatch(0, {{4, 1, 0}});
    CHECK(w.agents()[0].path[0].z == doctest::Approx(2.0));
    w.step(0.25);
    CHECK(w.agents()[0].pose.position().x == doctest::Approx(3.0));
  }
  SUBCASE("deterministic for a seed") {
    auto make = [&] {
      SimParams p;
      p.seed = 77;
      return World(grid, {{{10, 10, 0}, 2e9}}, {agent_at({8, 8, 2})}, default_table(), p);
    };
    World a = make(), b = make();
    std::ostringstream la, lb;
    ConeLogWriter wa(la), wb(lb);
    for (int i = 0; i < 200; ++i) {
      wa.write(a.step(0.25).cones);
      wb.write(b.step(0.25).cones);
    }
    CHECK(la.str() == lb.str());
    CHECK(la.str().size() > 200);
  }
  SUBCASE("rate matches the detection kernel") {
    World w(grid, {{{10, 10, 0}, 2e9}}, {}, default_table(), SimParams{});
    const SensorPose pose({10, 15, 0}, 0, 0, 0);
    const double k = physics::detection_kernel(pose, {10, 10, 0}, default_table(), {0.01});
    CHECK(w.event_rate(w.sources()[0], pose) ==
          doctest::Approx(2e9 * 0.014 * 0.014 / (4 * pi) * k));
  }
}

TEST_CASE("measurement logs round trip exactly") {
  Rng rng(3);
  NoiseSpec n;
  std::vector<ComptonCone> cones;
  std::vector<Viewpoint> vps;
  for (int i = 0; i < 50; ++i) {
    const SensorPose pose({0.1 * i, 1.0 / (i + 1), 2}, 0, 0, 0.01 * i);
    for (auto& c : synthesize_cone({3, 4, 0}, pose, n, rng, 0.25 * i, i % 3)) cones.push_back(c);
    vps.push_back({pose, 0.25 * (i + 1), i % 3});
  }
  std::stringstream cs, vs;
  ConeLogWriter(cs).write(cones);
  ViewpointLogWriter(vs).write(vps);
  CHECK(cs.str().rfind(std::string("# ") + kConeLogSchema, 0) == 0);
  const auto cones2 = read_cone_log(cs);
  const auto vps2 = read_viewpoint_log(vs);
  REQUIRE(cones2.size() == cones.size());
  REQUIRE(vps2.size() == vps.size());
  for (std::size_t i = 0; i < cones.size(); ++i) {
    CHECK(cones2[i].axis() == cones[i].axis());
    CHECK(cones2[i].opening_angle() == cones[i].opening_angle());
    CHECK(cones2[i].apex_pose() == cones[i].apex_pose());
    CHECK(cones2[i].timestamp() == cones[i].timestamp());
    CHECK(cones2[i].agent_id() == cones[i].agent_id());
  }
  for (std::size_t i = 0; i < vps.size(); ++i) CHECK(vps2[i].pose == vps[i].pose);
}

TEST_CASE("malformed logs name the line") {
  std::istringstream wrong_header("t,agent\n1,2\n");
  CHECK_THROWS_AS(read_cone_log(wrong_header), ParseError);
  std::istringstream short_row(std::string("# x\n") + kViewpointLogHeader + "\n0.25,0,1,2,3\n");
  try {
    read_viewpoint_log(short_row);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream bad_axis(std::string(kConeLogHeader) + "\n0,0,0,0,2,0,0,0,0,0,3,0.5\n");
  CHECK_THROWS_AS(read_cone_log(bad_axis), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_cone_log(empty), ParseError);
}

}  // TEST_SUITE
