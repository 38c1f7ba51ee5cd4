#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "crowdflow/environment.hpp"
#include "crowdflow/flowfield.hpp"
#include "crowdflow/invasiveness.hpp"

namespace crowdflow {

using NodeId = std::uint32_t;

inline constexpr NodeId kStartNode = 0;
inline constexpr NodeId kGoalNode = 1;
inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// PRM* connection radius r(n) = gamma * sqrt(ln n / n) with
/// gamma = 1.1 * 2 * sqrt(1.5 * free_area / pi).
/// Throws ContractViolation for n < 2 or non-positive area.
double connection_radius(std::size_t n, double free_area);

/// Maps a raw 64-bit generator output to [0, 1) using its top 53 bits.
constexpr double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Directed roadmap edge with both weights available to Dijkstra.
struct RoadmapEdge {
  NodeId from = 0;
  NodeId to = 0;
  double invasiveness = 0.0;
  double length = 0.0;
  double travel_time = 0.0;

  friend constexpr bool operator==(const RoadmapEdge&, const RoadmapEdge&) = default;
};

enum class NeighborSearch {
  Auto,        ///< brute force up to kGridSearchThreshold nodes, buckets above
  BruteForce,  ///< O(n^2) pair scan
  Grid,        ///< uniform buckets of side connection_radius
};

inline constexpr std::size_t kGridSearchThreshold = 2000;

struct BuildOptions {
  std::size_t samples = 2000;  ///< total node count, start and goal included
  std::uint64_t seed = 1;
  double quadrature_step = kDefaultQuadratureStep;
  NeighborSearch search = NeighborSearch::Auto;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Immutable PRM* roadmap. Node 0 is the start and node 1 the goal. Edges are
/// sorted by (from, to); every undirected connection appears in both
/// directions with independently integrated weights.
class Roadmap {
 public:
  Roadmap(std::vector<Vec2> nodes, std::vector<RoadmapEdge> edges, double connection_radius,
          std::uint64_t seed);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<RoadmapEdge>& edges() const { return edges_; }
  Vec2 node(NodeId id) const { return nodes_[id]; }
  std::span<const RoadmapEdge> out_edges(NodeId id) const;
  /// nullptr when there is no edge from -> to.
  const RoadmapEdge* find_edge(NodeId from, NodeId to) const;

  double connection_radius() const { return radius_; }
  std::uint64_t seed() const { return seed_; }

  friend bool operator==(const Roadmap&, const Roadmap&) = default;

 private:
  std::vector<Vec2> nodes_;
  std::vector<RoadmapEdge> edges_;
  std::vector<std::size_t> offsets_;
  double radius_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Samples a PRM* roadmap. Free nodes are drawn uniformly over the bounds
/// with std::mt19937_64(seed) (x then y, via unit_interval) and rejected if
/// inside an obstacle; every pair within connection_radius with a
/// collision-free segment is connected in both directions.
///
/// Throws InputError if start or goal is not free, ContractViolation for
/// fewer than 2 samples, InfeasibleEnvironmentError after 100 * samples
/// rejected draws.
Roadmap build_roadmap(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                      const BuildOptions& options);

enum class EdgeWeight { Invasiveness, Length };

struct ShortestPathTree {
  NodeId source = 0;
  std::vector<double> cost_to_come;  ///< kUnreachable when not reachable
  std::vector<NodeId> parent;        ///< kNoParent for the source and unreachable nodes

  bool reachable(NodeId id) const { return cost_to_come[id] != kUnreachable; }
  std::size_t reachable_count() const;
};

/// Single-source shortest paths. Equal-cost parents resolve to the smaller
/// node id.
ShortestPathTree dijkstra(const Roadmap& roadmap, NodeId source, EdgeWeight weight);

/// A roadmap path with its integrated cost. speeds[k] is the mean speed
/// (length / time) on segment k.
struct PlanResult {
  std::vector<NodeId> nodes;
  std::vector<Vec2> waypoints;
  std::vector<double> speeds;
  double total_invasiveness = 0.0;
  double total_time = 0.0;
  double total_length = 0.0;

  friend bool operator==(const PlanResult&, const PlanResult&) = default;
};

/// Walks parents back from `target` and scores the path with the roadmap's
/// stored edge costs. Throws NoPathError if `target` is unreachable.
PlanResult extract_plan(const Roadmap& roadmap, const ShortestPathTree& tree, NodeId target,
                        const SpeedLimits& limits);

/// Minimally invasive roadmap path from start to goal.
PlanResult plan(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                const BuildOptions& options);

/// Shortest-length path on the same roadmap, scored under the same
/// optimal-speed invasiveness measure.
PlanResult plan_naive(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                      const BuildOptions& options);

struct PlanComparison {
  Roadmap roadmap;
  PlanResult social;
  PlanResult naive;
};

/// Builds one roadmap and extracts both plans from it.
PlanComparison plan_both(const Environment& env, const CrowdFlow& flow, Vec2 start, Vec2 goal,
                         const BuildOptions& options);

}  // namespace crowdflow
