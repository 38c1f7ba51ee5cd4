#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "crowdflow/geometry.hpp"

namespace crowdflow {

/// Local macroscopic state of a crowd: pedestrian density (1/m^2), mean
/// velocity (m/s) and scalar velocity variance E|V - E[V]|^2 (m^2/s^2).
struct FlowSample {
  double density = 0.0;
  Vec2 mean_velocity;
  double variance = 0.0;

  friend constexpr bool operator==(const FlowSample&, const FlowSample&) = default;
};

// ---------------------------------------------------------------------------
// Analytic scalar primitives (used for density and variance).

struct ConstantScalar {
  double value = 0.0;
  friend constexpr bool operator==(const ConstantScalar&, const ConstantScalar&) = default;
};

/// Isotropic Gaussian bump: `floor + (peak - floor) * exp(-|x-c|^2 / (2 std^2))`.
/// `peak` is the value at the center.
struct GaussianBump {
  Vec2 center;
  double std_dev = 1.0;
  double floor = 0.0;
  double peak = 1.0;
  friend constexpr bool operator==(const GaussianBump&, const GaussianBump&) = default;
};

enum class Axis { X, Y };

/// Linear ramp along one axis from `start_value` at coordinate `from` to
/// `end_value` at `to`, held constant beyond both ends.
struct LinearRamp {
  Axis axis = Axis::X;
  double from = 0.0;
  double to = 1.0;
  double start_value = 0.0;
  double end_value = 1.0;
  friend constexpr bool operator==(const LinearRamp&, const LinearRamp&) = default;
};

using ScalarField = std::variant<ConstantScalar, GaussianBump, LinearRamp>;

double evaluate(const ScalarField& field, Vec2 x);

// ---------------------------------------------------------------------------
// Analytic velocity primitives.

struct UniformVelocity {
  Vec2 value;
  friend constexpr bool operator==(const UniformVelocity&, const UniformVelocity&) = default;
};

/// Solid-body rotation: V = omega * (-(y - cy), x - cx).
struct Vortex {
  Vec2 center;
  double angular_rate = 1.0;
  friend constexpr bool operator==(const Vortex&, const Vortex&) = default;
};

/// Constant-speed circular flow about `center`; counter-clockwise for positive
/// speed. Zero at the exact center.
struct Circulation {
  Vec2 center;
  double speed = 1.0;
  friend constexpr bool operator==(const Circulation&, const Circulation&) = default;
};

/// Constant-speed flow converging on `target`. Zero at the target itself.
struct Toward {
  Vec2 target;
  double speed = 1.0;
  friend constexpr bool operator==(const Toward&, const Toward&) = default;
};

using VelocityField = std::variant<UniformVelocity, Vortex, Circulation, Toward>;

Vec2 evaluate(const VelocityField& field, Vec2 x);

/// One pedestrian population. Its density is zero outside `support` when set.
struct ComponentFlow {
  ScalarField density = ConstantScalar{0.0};
  VelocityField velocity = UniformVelocity{};
  ScalarField variance = ConstantScalar{0.0};
  std::optional<Rect> support;

  FlowSample sample(Vec2 x) const;

  friend bool operator==(const ComponentFlow&, const ComponentFlow&) = default;
};

/// Density-weighted moment mixture of several populations at `x`:
///   rho = sum rho_i
///   V   = sum rho_i V_i / rho
///   s2  = sum rho_i (|V_i|^2 + s2_i) / rho - |V|^2
/// Empty space (rho == 0) yields the zero sample.
/// Throws ConfigError for an empty component list.
FlowSample mixture(std::span<const ComponentFlow> components, Vec2 x);

// ---------------------------------------------------------------------------

class CrowdFlow;

/// Regular grid of node values, bilinearly interpolated. Node (i, j) sits at
/// origin + (i, j) * cell_size; arrays are row-major with i fastest.
class GridField {
 public:
  static constexpr std::size_t kDefaultMaxNodes = 4'000'000;

  GridField() = default;
  /// Throws ConfigError on inconsistent sizes, non-positive cell size, fewer
  /// than 2 nodes per axis, non-finite or negative density/variance.
  GridField(Vec2 origin, double cell_size, std::size_t nx, std::size_t ny,
            std::vector<double> density, std::vector<double> velocity_x,
            std::vector<double> velocity_y, std::vector<double> variance);

  /// Samples `flow` at every node of a grid covering `bounds`.
  static GridField bake(const CrowdFlow& flow, const Rect& bounds, double cell_size,
                        std::size_t max_nodes = kDefaultMaxNodes);

  FlowSample sample(Vec2 x) const;

  Vec2 origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  Vec2 node_position(std::size_t i, std::size_t j) const;
  FlowSample node(std::size_t i, std::size_t j) const;

  const std::vector<double>& density() const { return density_; }
  const std::vector<double>& velocity_x() const { return velocity_x_; }
  const std::vector<double>& velocity_y() const { return velocity_y_; }
  const std::vector<double>& variance() const { return variance_; }

  friend bool operator==(const GridField&, const GridField&) = default;

 private:
  Vec2 origin_;
  double cell_size_ = 1.0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> density_;
  std::vector<double> velocity_x_;
  std::vector<double> velocity_y_;
  std::vector<double> variance_;
};

/// Stochastic crowd flow over a rectangular workspace. Queries outside the
/// workspace return the zero sample. Immutable and safe to share across threads.
class CrowdFlow {
 public:
  using Components = std::vector<ComponentFlow>;
  using Source = std::variant<Components, GridField>;

  /// Throws ConfigError on degenerate bounds or an empty component list.
  CrowdFlow(Rect bounds, Source source);

  static CrowdFlow uniform(Rect bounds, double density, Vec2 mean_velocity, double variance);

  FlowSample sample(Vec2 x) const;

  const Rect& bounds() const { return bounds_; }
  const Source& source() const { return source_; }

  friend bool operator==(const CrowdFlow&, const CrowdFlow&) = default;

 private:
  Rect bounds_;
  Source source_;
};

}  // namespace crowdflow
