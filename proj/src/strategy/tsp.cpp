#include "cone_mapper/strategy/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::strategy {

namespace {

double dist(const Position3& a, const Position3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double path_cost(const Position3& start, std::span<const Position3> points,
                 std::span<const std::size_t> order) {
  double cost = 0.0;
  const Position3* prev = &start;
  for (const std::size_t i : order) {
    cost += dist(*prev, points[i]);
    prev = &points[i];
  }
  return cost;
}

std::vector<std::size_t> nearest_neighbor_order(std::span<const Position3> points,
                                                const Position3& start) {
  std::vector<std::size_t> order;
  order.reserve(points.size());
  std::vector<bool> used(points.size(), false);
  Position3 cur = start;
  for (std::size_t step = 0; step < points.size(); ++step) {
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (used[i]) continue;
      const double d = dist(cur, points[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    used[best] = true;
    order.push_back(best);
    cur = points[best];
  }
  return order;
}

void two_opt(std::span<const Position3> points, const Position3& start,
             std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  if (n < 2) return;
  // Node k of the path: 0 is the start, k >= 1 is points[order[k-1]].
  auto node = [&](std::size_t k) -> const Position3& {
    return k == 0 ? start : points[order[k - 1]];
  };
  constexpr double kEps = 1e-12;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t k = i + 1; k <= n; ++k) {
        // Reverse nodes i..k. The edge after k only exists if k < n.
        double delta = dist(node(i - 1), node(k)) - dist(node(i - 1), node(i));
        if (k < n) delta += dist(node(i), node(k + 1)) - dist(node(k), node(k + 1));
        if (delta < -kEps) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i - 1),
                       order.begin() + static_cast<std::ptrdiff_t>(k));
          improved = true;
        }
      }
    }
  }
}

bool or_opt(std::span<const Position3> points, const Position3& start,
            std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  if (n < 2) return false;
  auto node = [&](std::size_t k) -> const Position3& {
    return k == 0 ? start : points[order[k - 1]];
  };
  constexpr double kEps = 1e-12;
  bool any = false;
  bool improved = true;
  while (improved) {
    improved = false;
    // Segment = path nodes i..j (1 <= i <= j <= n).
    for (std::size_t len = 1; len <= std::min<std::size_t>(3, n - 1) && !improved; ++len) {
      for (std::size_t i = 1; i + len - 1 <= n && !improved; ++i) {
        const std::size_t j = i + len - 1;
        const bool has_next = j < n;
        double removed = dist(node(i - 1), node(i));
        if (has_next) {
          removed += dist(node(j), node(j + 1)) - dist(node(i - 1), node(j + 1));
        }
        // Reinsert after node a, a outside [i-1, j].
        for (std::size_t a = 0; a <= n && !improved; ++a) {
          if (a + 1 >= i && a <= j) continue;
          for (int flip = 0; flip < 2 && !improved; ++flip) {
            const Position3& head = flip ? node(j) : node(i);
            const Position3& tail = flip ? node(i) : node(j);
            double added = dist(node(a), head);
            if (a < n) added += dist(tail, node(a + 1)) - dist(node(a), node(a + 1));
            if (added - removed < -kEps) {
              std::vector<std::size_t> seg(order.begin() + static_cast<std::ptrdiff_t>(i - 1),
                                           order.begin() + static_cast<std::ptrdiff_t>(j));
              if (flip) std::reverse(seg.begin(), seg.end());
              std::vector<std::size_t> out;
              out.reserve(n);
              for (std::size_t k = 1; k <= n; ++k) {
                if (k >= i && k <= j) continue;
                out.push_back(order[k - 1]);
                if (k == a) out.insert(out.end(), seg.begin(), seg.end());
              }
              if (a == 0) out.insert(out.begin(), seg.begin(), seg.end());
              order = std::move(out);
              improved = any = true;
            }
          }
        }
      }
    }
  }
  return any;
}

std::vector<std::size_t> sequence(std::span<const Position3> points, const Position3& start) {
  if (points.size() > kMaxSequenceLength) {
    throw ConfigError("sequence: " + std::to_string(points.size()) +
                      " waypoints exceed the limit of " + std::to_string(kMaxSequenceLength));
  }
  if (points.empty()) return {};
  const std::size_t n = points.size();
  auto polish = [&](std::vector<std::size_t>& order) {
    do {
      two_opt(points, start, order);
    } while (or_opt(points, start, order));
  };

  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t first = 0; first < n; ++first) {
    // Nearest-neighbour completion after a forced first stop.
    std::vector<std::size_t> rest_idx;
    std::vector<Position3> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == first) continue;
      rest_idx.push_back(i);
      rest.push_back(points[i]);
    }
    std::vector<std::size_t> order{first};
    for (const std::size_t r : nearest_neighbor_order(rest, points[first])) {
      order.push_back(rest_idx[r]);
    }
    polish(order);
    const double c = path_cost(start, points, order);
    if (c < best_cost - 1e-12) {
      best_cost = c;
      best = std::move(order);
    }
  }

  // Double-bridge kicks (A B C D -> A C B D) from the best order, keeping
  // improvements. Fixed seed so the result depends only on the input.
  if (n >= 4) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    const int kicks = n <= 12 ? 60 : 15;
    for (int k = 0; k < kicks; ++k) {
      std::uniform_int_distribution<std::size_t> cut(0, n);
      std::size_t c[3] = {cut(rng), cut(rng), cut(rng)};
      std::sort(c, c + 3);
      if (c[0] == c[1] || c[1] == c[2]) continue;
      std::vector<std::size_t> order;
      order.reserve(n);
      const auto at = [&](std::size_t i) { return best.begin() + static_cast<std::ptrdiff_t>(i); };
      order.insert(order.end(), best.begin(), at(c[0]));
      order.insert(order.end(), at(c[1]), at(c[2]));
      order.insert(order.end(), at(c[0]), at(c[1]));
      order.insert(order.end(), at(c[2]), best.end());
      polish(order);
      const double cost = path_cost(start, points, order);
      if (cost < best_cost - 1e-12) {
        best_cost = cost;
        best = std::move(order);
      }
    }
  }
  return best;
}

}  // namespace cone_mapper::strategy
