#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crowdflow/environment.hpp"
#include "crowdflow/flowfield.hpp"
#include "crowdflow/roadmap.hpp"

namespace crowdflow {

/// Version written to, and required in, scenario files.
inline constexpr int kScenarioSchemaVersion = 1;

struct PlannerDefaults {
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  double quadrature_step = kDefaultQuadratureStep;

  friend constexpr bool operator==(const PlannerDefaults&, const PlannerDefaults&) = default;
};

/// A complete planning problem: workspace, crowd, endpoints and planner defaults.
struct Scenario {
  std::string name;
  Environment environment;
  CrowdFlow flow;
  Vec2 start;
  Vec2 goal;
  PlannerDefaults defaults;

  /// Throws InputError if the environment is invalid or start/goal are not free.
  void validate() const;

  BuildOptions build_options() const {
    return {defaults.samples, defaults.seed, defaults.quadrature_step, NeighborSearch::Auto, 0};
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Built-in experiments. Geometry constants live in scenarios.cpp.

/// Stationary crowd around a point of interest: Gaussian density bump
/// (floor 0.5, peak 1.5 /m^2, std 3 m) in a 20 m square, V = 0, s2 = 1.
Scenario density_scenario();

/// Crowd orbiting the workspace center at 1 m/s with rho = 1, s2 = 0.25.
Scenario velocity_scenario();

/// Three mixed populations (up, down, still) with rho = 1 and V = 0
/// everywhere; the velocity variance rises from 0.25 on the left edge to 1.25
/// on the right edge.
Scenario variance_scenario();

/// Audience leaving an inner hall through two doors and the outer room
/// through one main exit.
Scenario concert_hall();

/// Names accepted by builtin_scenario(), in a fixed order.
const std::vector<std::string>& builtin_scenario_names();

/// Throws InputError listing the valid names when `name` is unknown.
Scenario builtin_scenario(std::string_view name);

// ---------------------------------------------------------------------------
// JSON interchange. Keys are written sorted, so to_json is canonical.

std::string to_json(const Scenario& scenario);

/// Throws ParseError (JSON pointer to the offending value) on malformed
/// documents and ValidationError on physically invalid content.
Scenario scenario_from_json(std::string_view text);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Throws InputError if the file cannot be read, plus the errors of
/// scenario_from_json.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace crowdflow
