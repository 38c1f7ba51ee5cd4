#include "crowdflow/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>

#include "crowdflow/error.hpp"
#include "parallel.hpp"
#include "shortest_path.hpp"

namespace crowdflow {
namespace {

using NodePair = std::pair<NodeId, NodeId>;

bool connectable(const Environment& env, const std::vector<Vec2>& nodes, NodeId i, NodeId j,
                 double radius_sq) {
  const double d2 = norm_sq(nodes[j] - nodes[i]);
  return d2 > 0.0 && d2 <= radius_sq && collision_free(env, nodes[i], nodes[j]);
}

std::vector<NodePair> brute_force_pairs(const Environment& env, const std::vector<Vec2>& nodes,
                                        double radius) {
  const double r2 = radius * radius;
  std::vector<NodePair> pairs;
  const auto n = static_cast<NodeId>(nodes.size());
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (connectable(env, nodes, i, j, r2)) pairs.emplace_back(i, j);
  return pairs;
}

std::vector<NodePair> bucketed_pairs(const Environment& env, const std::vector<Vec2>& nodes,
                                     double radius) {
  const double r2 = radius * radius;
  const Rect& b = env.bounds;
  const auto cols = static_cast<long>(std::max(1.0, std::ceil(b.width() / radius)));
  const auto rows = static_cast<long>(std::max(1.0, std::ceil(b.height() / radius)));
  auto cell_of = [&](Vec2 p) {
    const long cx = std::clamp(static_cast<long>((p.x - b.min.x) / radius), 0L, cols - 1);
    const long cy = std::clamp(static_cast<long>((p.y - b.min.y) / radius), 0L, rows - 1);
    return std::pair{cx, cy};
  };

  // Counting sort of node ids into buckets; ids stay ascending within a bucket.
  std::vector<std::size_t> start(static_cast<std::size_t>(cols * rows) + 1, 0);
  for (const Vec2& p : nodes) {
    const auto [cx, cy] = cell_of(p);
    ++start[static_cast<std::size_t>(cy * cols + cx) + 1];
  }
  for (std::size_t k = 1; k < start.size(); ++k) start[k] += start[k - 1];
  std::vector<NodeId> bucket(nodes.size());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (NodeId i = 0; i < nodes.size(); ++i) {
      const auto [cx, cy] = cell_of(nodes[i]);
      bucket[fill[static_cast<std::size_t>(cy * cols + cx)]++] = i;
    }
  }

  std::vector<NodePair> pairs;
  for (NodeId i = 0; i < nodes.size(); ++i) {
    const auto [cx, cy] = cell_of(nodes[i]);
    for (long y = std::max(0L, cy - 1); y <= std::min(rows - 1, cy + 1); ++y) {
      for (long x = std::max(0L, cx - 1); x <= std::min(cols - 1, cx + 1); ++x) {
        const auto cell = static_cast<std::size_t>(y * cols + x);
        for (std::size_t k = start[cell]; k < start[cell + 1]; ++k) {
          const NodeId j = bucket[k];
          if (j > i && connectable(env, nodes, i, j, r2)) pairs.emplace_back(i, j);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

double connection_radius(std::size_t n, double free_area) {
  if (n < 2) throw ContractViolation("connection_radius needs n >= 2");
  if (!(free_area > 0.0)) throw ContractViolation("connection_radius needs free_area > 0");
  const double gamma = 1.1 * 2.0 * std::sqrt(1.5 * free_area / std::numbers::pi);
  const auto nd = static_cast<double>(n);
  return gamma * std::sqrt(std::log(nd) / nd);
}

// ---------------------------------------------------------------------------

Roadmap::Roadmap(std::vector<Vec2> nodes, std::vector<RoadmapEdge> edges, double connection_radius,
                 std::uint64_t seed)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), radius_(connection_radius), seed_(seed) {
  std::sort(edges_.begin(), edges_.end(), [](const RoadmapEdge& a, const RoadmapEdge& b) {
    return std::pair{a.from, a.to} < std::pair{b.from, b.to};
  });
  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    if (e.from >= nodes_.size() || e.to >= nodes_.size())
      throw ContractViolation("roadmap edge references a missing node");
    if (e.from == e.to) throw ContractViolation("roadmap self-edge");
    ++offsets_[e.from + 1];
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
}

std::span<const RoadmapEdge> Roadmap::out_edges(NodeId id) const {
  return std::span<const RoadmapEdge>(edges_).subspan(offsets_[id],
                                                      offsets_[id + 1] - offsets_[id]);
}

const RoadmapEdge* Roadmap::find_edge(NodeId from, NodeId to) const {
  const auto out = out_edges(from);
  const auto it = std::lower_bound(out.begin(), out.end(), to,
                                   [](const RoadmapEdge& e, NodeId t) { return e.to < t; });
  return it != out.end() && it->to == to ? &*it : nullptr;
}

Roadmap build_roadmap(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                      const BuildOptions& options) {
  env.validate();
  if (options.samples < 2) throw ContractViolation("roadmap needs at least 2 samples");
  if (options.samples > std::numeric_limits<NodeId>::max() / 2)
    throw ResourceError("too many roadmap samples");
  if (!is_finite(start) || !env.point_free(start))
    throw InputError("start position is in collision or out of bounds");
  if (!is_finite(goal) || !env.point_free(goal))
    throw InputError("goal position is in collision or out of bounds");

  std::vector<Vec2> nodes;
  nodes.reserve(options.samples);
  nodes.push_back(start);
  nodes.push_back(goal);

  std::mt19937_64 rng(options.seed);
  const std::size_t max_attempts = 100 * options.samples;
  std::size_t attempts = 0;
  while (nodes.size() < options.samples) {
    if (++attempts > max_attempts) {
      throw InfeasibleEnvironmentError("rejection sampling found only " +
                                       std::to_string(nodes.size() - 2) + " free samples in " +
                                       std::to_string(max_attempts) + " attempts");
    }
    const double u = unit_interval(rng());
    const double v = unit_interval(rng());
    const Vec2 p{env.bounds.min.x + u * env.bounds.width(),
                 env.bounds.min.y + v * env.bounds.height()};
    if (env.point_free(p)) nodes.push_back(p);
  }

  const double radius = connection_radius(nodes.size(), env.free_area());
  const bool use_grid = options.search == NeighborSearch::Grid ||
                        (options.search == NeighborSearch::Auto &&
                         nodes.size() > kGridSearchThreshold);
  const std::vector<NodePair> pairs =
      use_grid ? bucketed_pairs(env, nodes, radius) : brute_force_pairs(env, nodes, radius);

  std::vector<RoadmapEdge> edges(2 * pairs.size());
  detail::parallel_for(pairs.size(), options.threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const EdgeCost fwd = edge_cost(flow, nodes[i], nodes[j], env.limits, options.quadrature_step);
    const EdgeCost bwd = edge_cost(flow, nodes[j], nodes[i], env.limits, options.quadrature_step);
    edges[2 * k] = {i, j, fwd.invasiveness, fwd.length, fwd.travel_time};
    edges[2 * k + 1] = {j, i, bwd.invasiveness, bwd.length, bwd.travel_time};
  });

  return Roadmap(std::move(nodes), std::move(edges), radius, options.seed);
}

// ---------------------------------------------------------------------------

std::size_t ShortestPathTree::reachable_count() const {
  return static_cast<std::size_t>(
      std::count_if(cost_to_come.begin(), cost_to_come.end(),
                    [](double c) { return c != kUnreachable; }));
}

ShortestPathTree dijkstra(const Roadmap& roadmap, NodeId source, EdgeWeight weight) {
  if (source >= roadmap.node_count()) throw ContractViolation("dijkstra source out of range");
  auto paths = detail::dijkstra(roadmap.node_count(), source, [&](NodeId u, auto&& visit) {
    for (const auto& e : roadmap.out_edges(u))
      visit(e.to, weight == EdgeWeight::Invasiveness ? e.invasiveness : e.length);
  });
  return {source, std::move(paths.cost), std::move(paths.parent)};
}

PlanResult extract_plan(const Roadmap& roadmap, const ShortestPathTree& tree, NodeId target,
                        const SpeedLimits& limits) {
  if (target >= roadmap.node_count()) throw ContractViolation("plan target out of range");
  if (!tree.reachable(target)) {
    RoadmapDiagnostics diag{roadmap.node_count(), roadmap.edge_count(), tree.reachable_count(),
                            roadmap.connection_radius()};
    throw NoPathError("node " + std::to_string(target) + " is unreachable from node " +
                          std::to_string(tree.source) + " (" +
                          std::to_string(diag.reachable_from_source) + " of " +
                          std::to_string(diag.nodes) + " nodes reachable)",
                      diag);
  }

  PlanResult result;
  for (NodeId id = target; id != kNoParent; id = tree.parent[id]) result.nodes.push_back(id);
  std::reverse(result.nodes.begin(), result.nodes.end());

  for (NodeId id : result.nodes) result.waypoints.push_back(roadmap.node(id));
  for (std::size_t k = 0; k + 1 < result.nodes.size(); ++k) {
    const RoadmapEdge* e = roadmap.find_edge(result.nodes[k], result.nodes[k + 1]);
    if (e == nullptr) throw ContractViolation("tree references a missing roadmap edge");
    result.total_invasiveness += e->invasiveness;
    result.total_time += e->travel_time;
    result.total_length += e->length;
    result.speeds.push_back(std::clamp(e->length / e->travel_time, limits.v_min, limits.v_max));
  }
  return result;
}

PlanComparison plan_both(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                         const BuildOptions& options) {
  Roadmap roadmap = build_roadmap(env, flow, start, goal, options);
  PlanResult social = extract_plan(
      roadmap, dijkstra(roadmap, kStartNode, EdgeWeight::Invasiveness), kGoalNode, env.limits);
  PlanResult naive = extract_plan(roadmap, dijkstra(roadmap, kStartNode, EdgeWeight::Length),
                                  kGoalNode, env.limits);
  return {std::move(roadmap), std::move(social), std::move(naive)};
}

PlanResult plan(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                const BuildOptions& options) {
  const Roadmap roadmap = build_roadmap(env, flow, start, goal, options);
  return extract_plan(roadmap, dijkstra(roadmap, kStartNode, EdgeWeight::Invasiveness), kGoalNode,
                      env.limits);
}

PlanResult plan_naive(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                      const BuildOptions& options) {
  const Roadmap roadmap = build_roadmap(env, flow, start, goal, options);
  return extract_plan(roadmap, dijkstra(roadmap, kStartNode, EdgeWeight::Length), kGoalNode,
                      env.limits);
}

}  // namespace crowdflow
