#include "cone_mapper/sim/agent.hpp"

#include <algorithm>
#include <cmath>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::sim {

void AgentState::validate() const {
  if (!(max_speed > 0.0)) throw ConfigError("agent max_speed must be > 0");
  if (!(speed > 0.0 && speed <= max_speed)) {
    throw ConfigError("agent speed must lie in (0, max_speed]");
  }
  if (!(flight_height > 0.0)) throw ConfigError("agent flight_height must be > 0");
}

AgentState advance_agent(AgentState agent, double dt) {
  if (!(dt > 0.0)) throw ConfigError("advance_agent: dt must be > 0");
  double budget = std::min(agent.speed, agent.max_speed) * dt;
  Position3 pos = agent.pose.position();
  double yaw = agent.pose.yaw();
  while (budget > 0.0 && agent.next < agent.path.size()) {
    const Position3& target = agent.path[agent.next];
    const Vec3 delta = target - pos;
    const double dist = norm(delta);
    if (std::hypot(delta.x, delta.y) > 1e-12) yaw = std::atan2(delta.y, delta.x);
    if (dist <= budget) {
      pos = target;
      budget -= dist;
      ++agent.next;
    } else {
      pos += delta * (budget / dist);
      budget = 0.0;
    }
  }
  agent.pose = SensorPose(pos, agent.pose.roll(), agent.pose.pitch(), yaw);
  return agent;
}

}  // namespace cone_mapper::sim
