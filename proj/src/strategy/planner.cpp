#include "cone_mapper/strategy/planner.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <queue>
#include <unordered_map>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::strategy {

ReservationTable::ReservationTable(std::size_t n_cells)
    : n_cells_(n_cells), park_from_(n_cells, kNever), last_(n_cells, -1) {}

std::uint64_t ReservationTable::vkey(TimeIndex t, CellIndex c) const {
  return static_cast<std::uint64_t>(t) * n_cells_ + c;
}

std::uint64_t ReservationTable::ekey(TimeIndex t, CellIndex a, CellIndex b) const {
  return (static_cast<std::uint64_t>(t) * n_cells_ + a) * n_cells_ + b;
}

bool ReservationTable::vertex_reserved(TimeIndex t, CellIndex c) const {
  return vertex_.contains(vkey(t, c));
}

bool ReservationTable::edge_reserved(TimeIndex t, CellIndex from, CellIndex to) const {
  return edge_.contains(ekey(t, from, to));
}

void ReservationTable::reserve_path(std::span<const CellIndex> path) {
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto ti = static_cast<TimeIndex>(t);
    vertex_.insert(vkey(ti, path[t]));
    last_[path[t]] = std::max(last_[path[t]], ti);
    if (t + 1 < path.size() && path[t + 1] != path[t]) {
      edge_.insert(ekey(ti, path[t], path[t + 1]));
    }
  }
}

void ReservationTable::park(CellIndex c, TimeIndex from) {
  park_from_[c] = std::min(park_from_[c], from);
}

std::size_t cell_distance(const GridMap& grid, CellIndex a, CellIndex b) {
  const auto dx = static_cast<std::ptrdiff_t>(grid.ix(a)) - static_cast<std::ptrdiff_t>(grid.ix(b));
  const auto dy = static_cast<std::ptrdiff_t>(grid.iy(a)) - static_cast<std::ptrdiff_t>(grid.iy(b));
  return static_cast<std::size_t>(std::max(std::abs(dx), std::abs(dy)));
}

namespace {

struct Node {
  TimeIndex f;
  TimeIndex t;
  CellIndex cell;
  bool operator<(const Node& o) const {
    // priority_queue pops the largest: invert f, prefer later t, then lower cell.
    if (f != o.f) return f > o.f;
    if (t != o.t) return t < o.t;
    return cell > o.cell;
  }
};

class LegSearch {
 public:
  LegSearch(const GridMap& grid, const ReservationTable& res, const PlannerOptions& opt)
      : grid_(grid), res_(res), opt_(opt) {}

  // Cells visited at t0+1 .. arrival, or nullopt. `goal(c, t)` accepts a
  // state; `h(c)` is an admissible step estimate.
  template <class Goal, class Heur>
  std::optional<std::vector<CellIndex>> run(CellIndex start, TimeIndex t0, TimeIndex t_limit,
                                            Goal&& goal, Heur&& h) {
    const std::size_t n = grid_.size();
    auto key = [n](TimeIndex t, CellIndex c) { return static_cast<std::uint64_t>(t) * n + c; };
    std::priority_queue<Node> open;
    std::unordered_map<std::uint64_t, std::uint64_t> parent;
    parent.emplace(key(t0, start), key(t0, start));
    open.push({t0 + static_cast<TimeIndex>(h(start)), t0, start});
    std::size_t expansions = 0;
    while (!open.empty()) {
      const Node cur = open.top();
      open.pop();
      if (goal(cur.cell, cur.t)) {
        std::vector<CellIndex> cells;
        std::uint64_t k = key(cur.t, cur.cell);
        for (TimeIndex t = cur.t; t > t0; --t) {
          cells.push_back(static_cast<CellIndex>(k % n));
          k = parent.at(k);
        }
        std::reverse(cells.begin(), cells.end());
        return cells;
      }
      if (++expansions > opt_.max_expansions) break;
      if (cur.t >= t_limit) continue;
      const auto cx = static_cast<std::ptrdiff_t>(grid_.ix(cur.cell));
      const auto cy = static_cast<std::ptrdiff_t>(grid_.iy(cur.cell));
      const TimeIndex nt = cur.t + 1;
      for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
        for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
          const std::ptrdiff_t x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(grid_.nx()) ||
              y >= static_cast<std::ptrdiff_t>(grid_.ny())) {
            continue;
          }
          const CellIndex nc = grid_.index(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
          if (!opt_.blocked.empty() && opt_.blocked[nc]) continue;
          if (!res_.enterable(nt, nc)) continue;
          if (nc != cur.cell && res_.edge_reserved(cur.t, nc, cur.cell)) continue;
          const std::uint64_t nk = key(nt, nc);
          if (!parent.emplace(nk, key(cur.t, cur.cell)).second) continue;
          open.push({nt + static_cast<TimeIndex>(h(nc)), nt, nc});
        }
      }
    }
    return std::nullopt;
  }

 private:
  const GridMap& grid_;
  const ReservationTable& res_;
  const PlannerOptions& opt_;
};

}  // namespace

PlanState plan_paths(const std::vector<std::vector<CellIndex>>& sequences, const GridMap& grid,
                     std::span<const CellIndex> starts, const PlannerOptions& options) {
  if (sequences.size() != starts.size()) {
    throw ConfigError("plan_paths: one waypoint sequence per agent required");
  }
  if (!options.blocked.empty() && options.blocked.size() != grid.size()) {
    throw ConfigError("plan_paths: blocked mask size mismatch");
  }
  for (const CellIndex s : starts) {
    if (s >= grid.size()) throw ConfigError("plan_paths: start cell outside the grid");
  }
  for (const auto& seq : sequences) {
    for (const CellIndex c : seq) {
      if (c >= grid.size()) throw ConfigError("plan_paths: waypoint cell outside the grid");
    }
  }

  PlanState state;
  state.reservations = ReservationTable(grid.size());
  ReservationTable& res = state.reservations;
  for (const CellIndex s : starts) res.park(s, 0);

  LegSearch search(grid, res, options);
  for (std::size_t a = 0; a < sequences.size(); ++a) {
    AgentPlan plan;
    plan.sequence = sequences[a];
    res.unpark(starts[a]);

    plan.path.push_back(starts[a]);
    for (const CellIndex goal : plan.sequence) {
      const CellIndex here = plan.path.back();
      const auto t0 = static_cast<TimeIndex>(plan.path.size() - 1);
      const TimeIndex limit =
          t0 + static_cast<TimeIndex>(cell_distance(grid, here, goal)) + options.slack;
      auto leg = search.run(
          here, t0, limit, [&](CellIndex c, TimeIndex) { return c == goal; },
          [&](CellIndex c) { return cell_distance(grid, c, goal); });
      if (!leg) {
        plan.skipped.push_back(goal);
        continue;
      }
      plan.path.insert(plan.path.end(), leg->begin(), leg->end());
      plan.reached.push_back(goal);
    }

    // Make sure the final cell can be held indefinitely.
    {
      const CellIndex here = plan.path.back();
      const auto t_end = static_cast<TimeIndex>(plan.path.size() - 1);
      if (!res.parkable(t_end, here)) {
        auto leg = search.run(
            here, t_end, t_end + options.slack + static_cast<TimeIndex>(grid.nx() + grid.ny()),
            [&](CellIndex c, TimeIndex t) { return res.parkable(t, c); },
            [](CellIndex) { return std::size_t{0}; });
        if (leg) plan.path.insert(plan.path.end(), leg->begin(), leg->end());
      }
    }
    res.reserve_path(plan.path);
    res.park(plan.path.back(), static_cast<TimeIndex>(plan.path.size() - 1));
    // A later agent sharing this start cell keeps its claim.
    for (std::size_t b = a + 1; b < starts.size(); ++b) {
      if (starts[b] == starts[a]) res.park(starts[a], 0);
    }
    state.agents.push_back(std::move(plan));
  }
  return state;
}

}  // namespace cone_mapper::strategy
