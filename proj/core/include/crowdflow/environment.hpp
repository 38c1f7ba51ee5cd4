#pragma once

#include <variant>
#include <vector>

#include "crowdflow/geometry.hpp"
#include "crowdflow/invasiveness.hpp"

namespace crowdflow {

using Obstacle = std::variant<Circle, Rect>;

/// Workspace for a point robot: closed rectangular bounds, closed static
/// obstacles and the robot's speed range.
struct Environment {
  Rect bounds;
  std::vector<Obstacle> obstacles;
  SpeedLimits limits;

  /// Throws InputError on degenerate bounds, malformed obstacles, invalid
  /// limits or no free area.
  void validate() const;

  /// Inside bounds and strictly outside every obstacle.
  bool point_free(Vec2 p) const;

  /// Bounds area minus obstacle areas (rectangles clipped to bounds).
  /// Overlapping obstacles are double counted.
  double free_area() const;

  friend bool operator==(const Environment&, const Environment&) = default;
};

/// Exact segment test: true iff segment ab lies in bounds and touches no
/// obstacle. Discs are closed, so a segment must pass strictly outside.
bool collision_free(const Environment& env, Vec2 a, Vec2 b);

/// Squared distance from `p` to segment ab.
double segment_point_distance_sq(Vec2 a, Vec2 b, Vec2 p);

/// True iff segment ab meets the closed rectangle `r`.
bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r);

}  // namespace crowdflow
