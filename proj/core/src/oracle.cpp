#include "crowdflow/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

#include "crowdflow/error.hpp"
#include "crowdflow/invasiveness.hpp"
#include "parallel.hpp"
#include "shortest_path.hpp"

namespace crowdflow {
namespace {

struct Step {
  int di;
  int dj;
};

constexpr std::array<Step, 16> kSteps{{
    {1, 0}, {0, 1}, {-1, 0}, {0, -1},                               // axis
    {1, 1}, {-1, 1}, {-1, -1}, {1, -1},                             // diagonal
    {2, 1}, {1, 2}, {-1, 2}, {-2, 1}, {-2, -1}, {-1, -2}, {1, -2}, {2, -1},  // knight
}};

}  // namespace

LatticePlan lattice_plan(const Scenario& scenario, int resolution, int connectivity) {
  if (resolution < 16) throw ContractViolation("lattice resolution must be >= 16");
  if (connectivity != 8 && connectivity != 16)
    throw ContractViolation("lattice connectivity must be 8 or 16");

  const Environment& env = scenario.environment;
  const Rect& b = env.bounds;
  const int side = resolution + 1;
  const double dx = b.width() / resolution;
  const double dy = b.height() / resolution;
  const std::size_t count = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);

  auto position = [&](int i, int j) {
    // Last vertex pinned to the bound so rounding cannot push it outside.
    const double x = i == resolution ? b.max.x : b.min.x + i * dx;
    const double y = j == resolution ? b.max.y : b.min.y + j * dy;
    return Vec2{x, y};
  };
  auto id = [side](int i, int j) { return static_cast<std::uint32_t>(j * side + i); };
  auto nearest = [&](Vec2 p) {
    const int i = std::clamp(static_cast<int>(std::lround((p.x - b.min.x) / dx)), 0, resolution);
    const int j = std::clamp(static_cast<int>(std::lround((p.y - b.min.y) / dy)), 0, resolution);
    return std::pair{i, j};
  };

  std::vector<bool> free(count);
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i) free[id(i, j)] = env.point_free(position(i, j));

  const auto [si, sj] = nearest(scenario.start);
  const auto [gi, gj] = nearest(scenario.goal);
  if (!free[id(si, sj)]) throw InputError("lattice vertex nearest the start is blocked");
  if (!free[id(gi, gj)]) throw InputError("lattice vertex nearest the goal is blocked");

  const auto k = static_cast<std::size_t>(connectivity);
  constexpr double blocked = std::numeric_limits<double>::quiet_NaN();
  std::vector<EdgeCost> weights(count * k, EdgeCost{blocked, blocked, blocked});
  detail::parallel_for(count, 0, [&](std::size_t u) {
    const int i = static_cast<int>(u % side);
    const int j = static_cast<int>(u / side);
    if (!free[u]) return;
    const Vec2 a = position(i, j);
    for (std::size_t s = 0; s < k; ++s) {
      const int ni = i + kSteps[s].di;
      const int nj = j + kSteps[s].dj;
      if (ni < 0 || nj < 0 || ni > resolution || nj > resolution || !free[id(ni, nj)]) continue;
      const Vec2 c = position(ni, nj);
      if (!collision_free(env, a, c)) continue;
      weights[u * k + s] = edge_cost(scenario.flow, a, c, env.limits,
                                     scenario.defaults.quadrature_step);
    }
  });

  const std::uint32_t source = id(si, sj);
  const std::uint32_t target = id(gi, gj);
  auto paths = detail::dijkstra(count, source, [&](std::uint32_t u, auto&& visit) {
    const int i = static_cast<int>(u % side);
    const int j = static_cast<int>(u / side);
    for (std::size_t s = 0; s < k; ++s) {
      const EdgeCost& w = weights[u * k + s];
      if (std::isnan(w.invasiveness)) continue;
      visit(id(i + kSteps[s].di, j + kSteps[s].dj), w.invasiveness);
    }
  });
  if (paths.cost[target] == std::numeric_limits<double>::infinity()) {
    const auto reachable = static_cast<std::size_t>(std::count_if(
        paths.cost.begin(), paths.cost.end(),
        [](double c) { return c != std::numeric_limits<double>::infinity(); }));
    throw NoPathError("lattice goal vertex is unreachable",
                      RoadmapDiagnostics{count, 0, reachable, 0.0});
  }

  std::vector<std::uint32_t> chain;
  for (std::uint32_t v = target; v != std::numeric_limits<std::uint32_t>::max();
       v = paths.parent[v])
    chain.push_back(v);
  std::reverse(chain.begin(), chain.end());

  LatticePlan plan{resolution, connectivity, 0.0, 0.0, 0.0, {}};
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const int i = static_cast<int>(chain[n] % side);
    const int j = static_cast<int>(chain[n] / side);
    plan.path.push_back(position(i, j));
    if (n == 0) continue;
    const int pi = static_cast<int>(chain[n - 1] % side);
    const int pj = static_cast<int>(chain[n - 1] / side);
    for (std::size_t s = 0; s < k; ++s) {
      if (pi + kSteps[s].di == i && pj + kSteps[s].dj == j) {
        const EdgeCost& w = weights[chain[n - 1] * k + s];
        plan.cost += w.invasiveness;
        plan.travel_time += w.travel_time;
        plan.length += w.length;
        break;
      }
    }
  }
  return plan;
}

}  // namespace crowdflow
