#include "crowdflow/scenarios.hpp"

#include <cmath>
#include <string>

#include "crowdflow/error.hpp"

namespace crowdflow {
namespace {

bool nonnegative_everywhere(const ScalarField& f) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantScalar>) {
          return s.value >= 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          return s.floor >= 0.0 && s.peak >= 0.0;
        } else {
          return s.start_value >= 0.0 && s.end_value >= 0.0;
        }
      },
      f);
}

// Density scenario.
constexpr Rect kDensityBounds{{0.0, 0.0}, {20.0, 20.0}};
constexpr double kBumpStd = 3.0;
constexpr double kBumpFloor = 0.5;
constexpr double kBumpPeak = 1.5;
constexpr Vec2 kDensityStart{2.0, 10.0};
constexpr Vec2 kDensityGoal{18.0, 10.0};

// Velocity scenario.
constexpr Rect kVelocityBounds{{0.0, 0.0}, {20.0, 20.0}};
constexpr double kOrbitSpeed = 1.0;
constexpr double kOrbitVariance = 0.25;
constexpr Vec2 kVelocityStart{4.0, 9.0};
constexpr Vec2 kVelocityGoal{16.0, 11.0};

// Variance scenario. Opposing streams at speed s with density fraction f each
// give s2 = 2 f s^2; f is capped at 0.5 by rho = 1, so s^2 = 1.25.
constexpr Rect kVarianceBounds{{0.0, 0.0}, {20.0, 20.0}};
constexpr double kStreamSpeed = 1.118033988749895;  // sqrt(1.25)
constexpr double kStreamFractionLeft = 0.1;
constexpr double kStreamFractionRight = 0.5;
constexpr Vec2 kVarianceStart{2.5, 1.0};
constexpr Vec2 kVarianceGoal{2.5, 19.0};

// Concert hall: outer room [0,30]x[0,20] with a lobby strip above the main
// exit, inner room [4,20]x[4,14] with two doors in its top wall.
constexpr Rect kHallBounds{{0.0, 0.0}, {30.0, 22.0}};
constexpr double kWall = 0.2;  // half thickness
constexpr double kOuterTop = 20.0;
constexpr double kExitLo = 24.0;
constexpr double kExitHi = 27.0;
constexpr Rect kInner{{4.0, 4.0}, {20.0, 14.0}};
constexpr double kLeftDoorLo = 6.5;
constexpr double kLeftDoorHi = 8.5;
constexpr double kRightDoorLo = 15.5;
constexpr double kRightDoorHi = 17.5;
constexpr Vec2 kLeftDoor{7.5, 14.0};
constexpr Vec2 kRightDoor{16.5, 14.0};
constexpr Vec2 kMainExit{25.5, 20.0};
constexpr Vec2 kHallStart{27.0, 2.0};
constexpr Vec2 kHallGoal{10.0, 9.0};

Scenario finish(Scenario s) {
  s.validate();
  return s;
}

}  // namespace

void Scenario::validate() const {
  environment.validate();
  if (!environment.point_free(start)) throw InputError("scenario start is not in free space");
  if (!environment.point_free(goal)) throw InputError("scenario goal is not in free space");
  if (const auto* comps = std::get_if<CrowdFlow::Components>(&flow.source())) {
    for (std::size_t k = 0; k < comps->size(); ++k) {
      const auto& c = (*comps)[k];
      if (!nonnegative_everywhere(c.density))
        throw InputError("component " + std::to_string(k) + " density can be negative");
      if (!nonnegative_everywhere(c.variance))
        throw InputError("component " + std::to_string(k) + " variance can be negative");
    }
  }
}

Scenario density_scenario() {
  ComponentFlow crowd{GaussianBump{kDensityBounds.center(), kBumpStd, kBumpFloor, kBumpPeak},
                      UniformVelocity{}, ConstantScalar{1.0}, std::nullopt};
  return finish({"density",
                 {kDensityBounds, {}, {}},
                 CrowdFlow(kDensityBounds, CrowdFlow::Components{crowd}),
                 kDensityStart,
                 kDensityGoal,
                 {}});
}

Scenario velocity_scenario() {
  ComponentFlow orbit{ConstantScalar{1.0}, Circulation{kVelocityBounds.center(), kOrbitSpeed},
                      ConstantScalar{kOrbitVariance}, std::nullopt};
  return finish({"velocity",
                 {kVelocityBounds, {}, {}},
                 CrowdFlow(kVelocityBounds, CrowdFlow::Components{orbit}),
                 kVelocityStart,
                 kVelocityGoal,
                 {}});
}

Scenario variance_scenario() {
  const double lo = kVarianceBounds.min.x;
  const double hi = kVarianceBounds.max.x;
  const LinearRamp stream{Axis::X, lo, hi, kStreamFractionLeft, kStreamFractionRight};
  const LinearRamp still{Axis::X, lo, hi, 1.0 - 2.0 * kStreamFractionLeft,
                         1.0 - 2.0 * kStreamFractionRight};
  CrowdFlow::Components parts{
      {stream, UniformVelocity{{0.0, kStreamSpeed}}, ConstantScalar{0.0}, std::nullopt},
      {stream, UniformVelocity{{0.0, -kStreamSpeed}}, ConstantScalar{0.0}, std::nullopt},
      {still, UniformVelocity{}, ConstantScalar{0.0}, std::nullopt},
  };
  return finish({"variance",
                 {kVarianceBounds, {}, {}},
                 CrowdFlow(kVarianceBounds, std::move(parts)),
                 kVarianceStart,
                 kVarianceGoal,
                 {}});
}

Scenario concert_hall() {
  const double t = kOuterTop;
  const double iy = kInner.max.y;
  std::vector<Obstacle> walls{
      // outer wall with the main exit
      Rect{{kHallBounds.min.x, t - kWall}, {kExitLo, t + kWall}},
      Rect{{kExitHi, t - kWall}, {kHallBounds.max.x, t + kWall}},
      // inner room: bottom, left, right
      Rect{{kInner.min.x - kWall, kInner.min.y - kWall}, {kInner.max.x + kWall, kInner.min.y + kWall}},
      Rect{{kInner.min.x - kWall, kInner.min.y - kWall}, {kInner.min.x + kWall, iy + kWall}},
      Rect{{kInner.max.x - kWall, kInner.min.y - kWall}, {kInner.max.x + kWall, iy + kWall}},
      // inner room top, split by the two doors
      Rect{{kInner.min.x - kWall, iy - kWall}, {kLeftDoorLo, iy + kWall}},
      Rect{{kLeftDoorHi, iy - kWall}, {kRightDoorLo, iy + kWall}},
      Rect{{kRightDoorHi, iy - kWall}, {kInner.max.x + kWall, iy + kWall}},
  };

  const double mid = 0.5 * (kInner.min.x + kInner.max.x);
  const Rect left_seats{{kInner.min.x + kWall, kInner.min.y + kWall}, {mid, iy - kWall}};
  const Rect right_seats{{mid, kInner.min.y + kWall}, {kInner.max.x - kWall, iy - kWall}};
  const Rect corridor{{kHallBounds.min.x, iy - kWall}, {kHallBounds.max.x, t + kWall}};
  const Rect beyond_exit{{kHallBounds.min.x, iy + kWall}, {kHallBounds.max.x, kHallBounds.max.y}};
  const Vec2 lobby_target{kMainExit.x, kHallBounds.max.y + 1.0};

  CrowdFlow::Components parts{
      // stragglers everywhere
      {ConstantScalar{0.05}, UniformVelocity{}, ConstantScalar{0.5}, std::nullopt},
      // seated audience heading for the nearest door
      {ConstantScalar{1.0}, Toward{kLeftDoor, 1.0}, ConstantScalar{0.3}, left_seats},
      {ConstantScalar{1.2}, Toward{kRightDoor, 1.0}, ConstantScalar{0.3}, right_seats},
      // crowds at the doors, streaming toward the main exit
      {GaussianBump{{kLeftDoor.x, iy + 0.5}, 1.2, 0.0, 1.5}, Toward{kMainExit, 1.0},
       ConstantScalar{0.2}, corridor},
      {GaussianBump{{kRightDoor.x, iy + 0.5}, 1.5, 0.0, 2.5}, Toward{kMainExit, 1.0},
       ConstantScalar{0.2}, corridor},
      // corridor stream thickening toward the exit
      {LinearRamp{Axis::X, kInner.min.x, kExitLo, 0.4, 1.2}, Toward{kMainExit, 1.0},
       ConstantScalar{0.2}, Rect{{kInner.min.x, iy + kWall}, {kExitHi, t - kWall}}},
      // queue at the main exit and dispersal into the lobby
      {GaussianBump{{kMainExit.x, t - 0.5}, 2.0, 0.0, 2.5}, Toward{lobby_target, 1.0},
       ConstantScalar{0.2}, beyond_exit},
  };
  return finish({"concert_hall",
                 {kHallBounds, std::move(walls), {}},
                 CrowdFlow(kHallBounds, std::move(parts)),
                 kHallStart,
                 kHallGoal,
                 {}});
}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names{"density", "velocity", "variance", "concert_hall"};
  return names;
}

Scenario builtin_scenario(std::string_view name) {
  if (name == "density") return density_scenario();
  if (name == "velocity") return velocity_scenario();
  if (name == "variance") return variance_scenario();
  if (name == "concert_hall") return concert_hall();
  std::string valid;
  for (const auto& n : builtin_scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InputError("unknown scenario '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace crowdflow
