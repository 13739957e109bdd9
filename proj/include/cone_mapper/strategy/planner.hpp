#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_set>
#include <vector>

#include "cone_mapper/core/grid.hpp"

namespace cone_mapper::strategy {

using TimeIndex = std::int64_t;
inline constexpr TimeIndex kNever = std::numeric_limits<TimeIndex>::max();

/// Time-indexed occupancy shared by the agents planned so far. A vertex entry
/// (t, c) means some agent is in cell c at step t; an edge entry (t, a, b)
/// means it moves a -> b between t and t + 1. A parked cell stays occupied
/// from its park time onwards.
class ReservationTable {
 public:
  explicit ReservationTable(std::size_t n_cells);

  bool vertex_reserved(TimeIndex t, CellIndex c) const;
  bool edge_reserved(TimeIndex t, CellIndex from, CellIndex to) const;
  TimeIndex parked_from(CellIndex c) const { return park_from_[c]; }
  TimeIndex last_reserved(CellIndex c) const { return last_[c]; }

  /// True if an agent may enter c at time t (vertex free, not parked).
  bool enterable(TimeIndex t, CellIndex c) const {
    return park_from_[c] > t && !vertex_reserved(t, c);
  }
  /// True if an agent arriving at c at time t could stay there for good.
  bool parkable(TimeIndex t, CellIndex c) const {
    return park_from_[c] == kNever && last_[c] < t;
  }

  void reserve_path(std::span<const CellIndex> path);
  void park(CellIndex c, TimeIndex from);
  void unpark(CellIndex c) { park_from_[c] = kNever; }
  std::size_t vertex_count() const { return vertex_.size(); }

 private:
  std::uint64_t vkey(TimeIndex t, CellIndex c) const;
  std::uint64_t ekey(TimeIndex t, CellIndex a, CellIndex b) const;

  std::size_t n_cells_;
  std::unordered_set<std::uint64_t> vertex_;
  std::unordered_set<std::uint64_t> edge_;
  std::vector<TimeIndex> park_from_;
  std::vector<TimeIndex> last_;
};

struct AgentPlan {
  std::vector<CellIndex> sequence;  // requested waypoint order
  std::vector<CellIndex> reached;   // waypoints actually planned to
  std::vector<CellIndex> skipped;   // unreachable waypoints
  std::vector<CellIndex> path;      // path[t] = cell at time index t; parked after the end
};

struct PlanState {
  std::vector<AgentPlan> agents;
  ReservationTable reservations{0};
};

struct PlannerOptions {
  // Cells no agent may enter (optional; empty = open map).
  std::vector<bool> blocked;
  // Extra time steps allowed beyond the Chebyshev distance of a leg.
  TimeIndex slack = 64;
  std::size_t max_expansions = 200000;
};

/// Chebyshev distance in cells.
std::size_t cell_distance(const GridMap& grid, CellIndex a, CellIndex b);

/// Prioritized multi-agent planning: agents are planned in index order, each
/// leg by time-expanded A* on the 8-connected grid (unit time per move, waits
/// allowed) around the reservations of earlier agents. Not-yet-planned agents
/// hold their start cells. A finished agent parks at its last cell; if that
/// cell is needed later by an earlier agent it first moves to a free one.
PlanState plan_paths(const std::vector<std::vector<CellIndex>>& sequences, const GridMap& grid,
                     std::span<const CellIndex> starts, const PlannerOptions& options = {});

}  // namespace cone_mapper::strategy
