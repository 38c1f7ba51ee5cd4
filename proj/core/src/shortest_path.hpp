#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace crowdflow::detail {

struct ShortestPaths {
  std::vector<double> cost;
  std::vector<std::uint32_t> parent;
};

/// Lazy-deletion Dijkstra over a CSR graph. `for_each_out(u, visit)` must call
/// visit(v, weight) for every edge u -> v. Among equal-cost candidates the
/// smaller parent id wins, provided the child is still unsettled.
template <class ForEachOut>
ShortestPaths dijkstra(std::size_t node_count, std::uint32_t source, ForEachOut&& for_each_out) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  ShortestPaths out{std::vector<double>(node_count, inf),
                    std::vector<std::uint32_t>(node_count, none)};
  std::vector<bool> settled(node_count, false);

  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  out.cost[source] = 0.0;
  heap.emplace(0.0, source);

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != out.cost[u]) continue;
    settled[u] = true;
    for_each_out(u, [&](std::uint32_t v, double w) {
      if (settled[v]) return;
      const double candidate = d + w;
      if (candidate < out.cost[v]) {
        out.cost[v] = candidate;
        out.parent[v] = u;
        heap.emplace(candidate, v);
      } else if (candidate == out.cost[v] && u < out.parent[v]) {
        out.parent[v] = u;
      }
    });
  }
  return out;
}

}  // namespace crowdflow::detail
