#include "crowdflow/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "crowdflow/error.hpp"

namespace crowdflow {

double segment_point_distance_sq(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 d = b - a;
  const double len_sq = norm_sq(d);
  double t = 0.0;
  if (len_sq > 0.0) t = std::clamp(dot(p - a, d) / len_sq, 0.0, 1.0);
  return norm_sq(p - (a + t * d));
}

bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r) {
  // Liang-Barsky clip of the parameter interval [0, 1] against both slabs.
  double t0 = 0.0;
  double t1 = 1.0;
  const double start[2] = {a.x, a.y};
  const double delta[2] = {b.x - a.x, b.y - a.y};
  const double lo[2] = {r.min.x, r.min.y};
  const double hi[2] = {r.max.x, r.max.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (delta[axis] == 0.0) {
      if (start[axis] < lo[axis] || start[axis] > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - start[axis]) / delta[axis];
    double tb = (hi[axis] - start[axis]) / delta[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

void Environment::validate() const {
  if (bounds.degenerate() || !is_finite(bounds.min) || !is_finite(bounds.max))
    throw InputError("environment bounds are degenerate");
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    const bool ok = std::visit(
        [](const auto& o) {
          if constexpr (std::is_same_v<std::decay_t<decltype(o)>, Circle>) {
            return is_finite(o.center) && std::isfinite(o.radius) && o.radius > 0.0;
          } else {
            return is_finite(o.min) && is_finite(o.max) && !o.degenerate();
          }
        },
        obstacles[k]);
    if (!ok) throw InputError("obstacle " + std::to_string(k) + " is malformed");
  }
  try {
    limits.validate();
  } catch (const ContractViolation& e) {
    throw InputError(e.what());
  }
  if (!(free_area() > 0.0)) throw InputError("environment has no free area");
}

bool Environment::point_free(Vec2 p) const {
  if (!bounds.contains(p)) return false;
  for (const auto& obstacle : obstacles) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
      if (norm_sq(p - c->center) <= c->radius * c->radius) return false;
    } else if (std::get<Rect>(obstacle).contains(p)) {
      return false;
    }
  }
  return true;
}

double Environment::free_area() const {
  double area = bounds.area();
  for (const auto& obstacle : obstacles) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
      area -= std::numbers::pi * c->radius * c->radius;
    } else {
      const auto& r = std::get<Rect>(obstacle);
      const double w = std::min(r.max.x, bounds.max.x) - std::max(r.min.x, bounds.min.x);
      const double h = std::min(r.max.y, bounds.max.y) - std::max(r.min.y, bounds.min.y);
      if (w > 0.0 && h > 0.0) area -= w * h;
    }
  }
  return area;
}

bool collision_free(const Environment& env, Vec2 a, Vec2 b) {
  // Bounds are convex, so containing both endpoints contains the segment.
  if (!env.bounds.contains(a) || !env.bounds.contains(b)) return false;
  for (const auto& obstacle : env.obstacles) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
      if (segment_point_distance_sq(a, b, c->center) <= c->radius * c->radius) return false;
    } else if (segment_intersects_rect(a, b, std::get<Rect>(obstacle))) {
      return false;
    }
  }
  return true;
}

}  // namespace crowdflow
