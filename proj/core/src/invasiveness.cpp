#include "crowdflow/invasiveness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crowdflow/error.hpp"

namespace crowdflow {
namespace {

double unchecked_cost_density(const FlowSample& s, Vec2 direction, double speed) {
  if (s.density == 0.0) return 0.0;
  const double energy = norm_sq(s.mean_velocity) + s.variance;
  const double per_meter = energy / speed + speed - 2.0 * dot(s.mean_velocity, direction);
  return std::max(0.0, s.density * per_meter);
}

}  // namespace

void SpeedLimits::validate() const {
  if (!(v_min > 0.0) || !(v_max >= v_min) || !std::isfinite(v_max)) {
    throw ContractViolation("speed limits need 0 < v_min <= v_max (got v_min=" +
                            std::to_string(v_min) + ", v_max=" + std::to_string(v_max) + ")");
  }
}

double instantaneous_invasiveness(const FlowSample& s, Vec2 v_robot) {
  return s.density * (norm_sq(s.mean_velocity - v_robot) + s.variance);
}

double optimal_speed(const FlowSample& s, const SpeedLimits& limits) {
  const double v = std::sqrt(norm_sq(s.mean_velocity) + s.variance);
  return std::clamp(v, limits.v_min, limits.v_max);
}

double cost_density(const FlowSample& s, Vec2 direction, const SpeedLimits& limits) {
  if (!(std::abs(norm(direction) - 1.0) <= 1e-9))
    throw ContractViolation("cost_density direction must be a unit vector");
  return unchecked_cost_density(s, direction, optimal_speed(s, limits));
}

EdgeCost edge_cost(const CrowdFlow& flow, Vec2 a, Vec2 b, const SpeedLimits& limits,
                   double quadrature_step) {
  if (!(quadrature_step > 0.0) || !std::isfinite(quadrature_step))
    throw ContractViolation("quadrature_step must be positive");
  limits.validate();
  const Vec2 delta = b - a;
  const double length = norm(delta);
  if (length == 0.0) throw DegenerateEdgeError("edge endpoints coincide");

  const Vec2 direction = delta / length;
  // Slack keeps exact multiples of the step from gaining a subinterval.
  const auto m = static_cast<long>(std::max(1.0, std::ceil(length / quadrature_step - 1e-9)));
  const double ds = length / static_cast<double>(m);

  double cost_sum = 0.0;
  double inverse_speed_sum = 0.0;
  for (long k = 0; k < m; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    const FlowSample s = flow.sample(a + t * delta);
    const double v = optimal_speed(s, limits);
    cost_sum += unchecked_cost_density(s, direction, v);
    inverse_speed_sum += 1.0 / v;
  }
  return {cost_sum * ds, inverse_speed_sum * ds, length};
}

EdgeCost path_invasiveness(const CrowdFlow& flow, std::span<const Vec2> waypoints,
                           const SpeedLimits& limits, double quadrature_step) {
  if (waypoints.size() < 2) throw ContractViolation("a path needs at least two waypoints");
  EdgeCost total;
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k)
    total += edge_cost(flow, waypoints[k], waypoints[k + 1], limits, quadrature_step);
  return total;
}

}  // namespace crowdflow
