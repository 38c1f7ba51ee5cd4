#pragma once

#include <span>

#include "crowdflow/flowfield.hpp"
#include "crowdflow/geometry.hpp"

namespace crowdflow {

/// Default composite-midpoint step for line integrals, in meters.
inline constexpr double kDefaultQuadratureStep = 0.05;

/// Admissible robot speed range, m/s. Requires 0 < v_min <= v_max.
struct SpeedLimits {
  double v_min = 0.1;
  double v_max = 2.0;

  /// Throws ContractViolation when the range is empty or non-positive.
  void validate() const;

  friend constexpr bool operator==(const SpeedLimits&, const SpeedLimits&) = default;
};

/// Accumulated cost of traversing a straight segment at the minimally
/// invasive speed profile.
struct EdgeCost {
  double invasiveness = 0.0;  ///< integral of I dt
  double travel_time = 0.0;   ///< seconds
  double length = 0.0;        ///< meters

  EdgeCost& operator+=(const EdgeCost& o) {
    invasiveness += o.invasiveness;
    travel_time += o.travel_time;
    length += o.length;
    return *this;
  }
};

/// Expected invasiveness rho * (|V - v|^2 + s2) of a robot moving with
/// velocity `v_robot` through a crowd in state `s`. With s2 = 0 this is the
/// deterministic measure rho * |V - v|^2.
double instantaneous_invasiveness(const FlowSample& s, Vec2 v_robot);

/// Speed minimizing invasiveness per unit distance, sqrt(|V|^2 + s2), clamped
/// to `limits`. Independent of the direction of travel.
double optimal_speed(const FlowSample& s, const SpeedLimits& limits);

/// Invasiveness per meter when travelling along unit vector `direction` at
/// optimal_speed: rho * ((|V|^2 + s2)/v + v - 2 V.u). Reduces to
/// 2 rho (v* - V.u) when the speed is not clamped. Always >= 0.
/// Throws ContractViolation if |direction| deviates from 1 by more than 1e-9.
double cost_density(const FlowSample& s, Vec2 direction, const SpeedLimits& limits);

/// Line integral of cost_density (and of 1/v for travel time) along the
/// directed segment a -> b, using ceil(|b-a| / quadrature_step) equal
/// midpoint subintervals. Direction matters through V.u.
/// Throws DegenerateEdgeError if a == b; ContractViolation on a bad step or limits.
EdgeCost edge_cost(const CrowdFlow& flow, Vec2 a, Vec2 b, const SpeedLimits& limits,
                   double quadrature_step = kDefaultQuadratureStep);

/// Sum of edge_cost over consecutive waypoints, accumulated from the front.
/// Throws ContractViolation for fewer than two waypoints.
EdgeCost path_invasiveness(const CrowdFlow& flow, std::span<const Vec2> waypoints,
                           const SpeedLimits& limits,
                           double quadrature_step = kDefaultQuadratureStep);

}  // namespace crowdflow
