#pragma once

#include <vector>

#include "crowdflow/geometry.hpp"
#include "crowdflow/scenarios.hpp"

namespace crowdflow {

/// Shortest path on a regular lattice, used as an independent reference for
/// roadmap plan costs.
struct LatticePlan {
  int resolution = 0;    ///< cells per side; nodes sit on the (resolution+1)^2 vertices
  int connectivity = 0;  ///< 8 or 16
  double cost = 0.0;     ///< integrated invasiveness
  double travel_time = 0.0;
  double length = 0.0;
  std::vector<Vec2> path;  ///< lattice vertices from the start vertex to the goal vertex
};

/// Builds the lattice over the scenario bounds, drops vertices in obstacles
/// and blocked edges, weights edges with edge_cost, and runs Dijkstra
/// between the vertices nearest to start and goal. Nested resolutions
/// (e.g. 100 and 400) share vertices.
///
/// Throws ContractViolation for resolution < 16 or connectivity not in
/// {8, 16}, InputError if the start or goal vertex is blocked, NoPathError
/// if they are disconnected.
LatticePlan lattice_plan(const Scenario& scenario, int resolution, int connectivity = 16);

}  // namespace crowdflow
