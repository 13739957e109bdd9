#include "cone_mapper/sim/world.hpp"

#include <cmath>
#include <random>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/rng.hpp"
#include "cone_mapper/physics/kernel.hpp"

namespace cone_mapper::sim {

namespace {
// Substream tags.
constexpr std::uint64_t kSourceStream = 1;
constexpr std::uint64_t kBackgroundStream = 2;
}  // namespace

void SourceSpec::validate() const {
  if (!(activity > 0.0) || !std::isfinite(activity)) {
    throw ConfigError("source activity must be > 0");
  }
  if (!is_finite(position)) throw ConfigError("source position must be finite");
}

void SimParams::validate() const {
  noise.validate();
  attenuation.validate();
  if (!(reference_area > 0.0)) throw ConfigError("detector reference area must be > 0");
}

World::World(GridMap grid, std::vector<SourceSpec> sources, std::vector<AgentState> agents,
             physics::LookupTable table, SimParams params)
    : grid_(std::move(grid)),
      sources_(std::move(sources)),
      agents_(std::move(agents)),
      table_(std::move(table)),
      params_(params) {
  params_.validate();
  for (const auto& s : sources_) s.validate();
  for (const auto& a : agents_) a.validate();
}

double World::event_rate(const SourceSpec& source, const SensorPose& pose) const {
  const double k = physics::detection_kernel(pose, source.position, table_, params_.attenuation);
  return physics::detection_rate(source.activity, k, params_.reference_area);
}

void World::dispatch(std::size_t agent_index, const std::vector<Position3>& waypoints) {
  AgentState& agent = agents_.at(agent_index);
  std::vector<Position3> lifted;
  lifted.reserve(waypoints.size());
  for (const auto& w : waypoints) {
    lifted.push_back({w.x, w.y, grid_.origin().z + grid_.terrain_height(w.x, w.y) +
                                    agent.flight_height});
  }
  agent.set_path(std::move(lifted));
}

StepOutput World::step(double dt) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
  ++step_;
  clock_ += dt;
  StepOutput out;
  out.viewpoints.reserve(agents_.size());
  for (auto& agent : agents_) {
    agent = advance_agent(std::move(agent), dt);
    out.viewpoints.push_back({agent.pose, clock_, agent.id});
  }

  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const AgentState& agent = agents_[a];
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      const SourceSpec& src = sources_[s];
      const double rate = event_rate(src, agent.pose);
      if (!(rate > 0.0)) continue;
      Rng rng = make_substream({params_.seed, step_, kSourceStream, s, a});
      std::poisson_distribution<long> events(rate * dt);
      const long n = events(rng);
      for (long e = 0; e < n; ++e) {
        auto cones = synthesize_cone(src.position, agent.pose, params_.noise, rng, clock_,
                                     agent.id);
        for (auto& c : cones) out.cones.push_back(std::move(c));
      }
      out.source_events += static_cast<std::size_t>(n);
      std::poisson_distribution<long> photo(rate * dt * kPhotoelectricPerCompton);
      out.photoelectric_events += static_cast<std::size_t>(photo(rng));
    }
    if (params_.noise.background_rate > 0.0) {
      Rng rng = make_substream({params_.seed, step_, kBackgroundStream, a});
      std::poisson_distribution<long> bg(params_.noise.background_rate * dt);
      const long n = bg(rng);
      for (long e = 0; e < n; ++e) {
        out.cones.push_back(background_cone(agent.pose, params_.noise, rng, clock_, agent.id));
      }
      out.background_cones += static_cast<std::size_t>(n);
    }
  }
  return out;
}

}  // namespace cone_mapper::sim
