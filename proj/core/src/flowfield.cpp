#include "crowdflow/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crowdflow/error.hpp"

namespace crowdflow {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr FlowSample kEmpty{};

double clamp_nonnegative(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

double evaluate(const ScalarField& field, Vec2 x) {
  return std::visit(
      overloaded{
          [](const ConstantScalar& c) { return c.value; },
          [x](const GaussianBump& g) {
            const double r2 = norm_sq(x - g.center);
            return g.floor + (g.peak - g.floor) * std::exp(-r2 / (2.0 * g.std_dev * g.std_dev));
          },
          [x](const LinearRamp& r) {
            const double coord = r.axis == Axis::X ? x.x : x.y;
            double t = (coord - r.from) / (r.to - r.from);
            t = std::clamp(t, 0.0, 1.0);
            return r.start_value + t * (r.end_value - r.start_value);
          },
      },
      field);
}

Vec2 evaluate(const VelocityField& field, Vec2 x) {
  return std::visit(
      overloaded{
          [](const UniformVelocity& u) { return u.value; },
          [x](const Vortex& v) {
            const Vec2 r = x - v.center;
            return Vec2{-v.angular_rate * r.y, v.angular_rate * r.x};
          },
          [x](const Circulation& c) {
            const Vec2 r = x - c.center;
            const double len = norm(r);
            if (len == 0.0) return Vec2{};
            return Vec2{-r.y, r.x} * (c.speed / len);
          },
          [x](const Toward& t) {
            const Vec2 d = t.target - x;
            const double len = norm(d);
            if (len == 0.0) return Vec2{};
            return d * (t.speed / len);
          },
      },
      field);
}

FlowSample ComponentFlow::sample(Vec2 x) const {
  if (support && !support->contains(x)) return kEmpty;
  return {clamp_nonnegative(evaluate(density, x)), evaluate(velocity, x),
          clamp_nonnegative(evaluate(variance, x))};
}

FlowSample mixture(std::span<const ComponentFlow> components, Vec2 x) {
  if (components.empty()) throw ConfigError("mixture requires at least one component flow");

  double rho = 0.0;
  Vec2 momentum;
  double second_moment = 0.0;
  std::size_t contributing = 0;
  FlowSample last;
  for (const auto& c : components) {
    const FlowSample s = c.sample(x);
    if (s.density == 0.0) continue;
    ++contributing;
    last = s;
    rho += s.density;
    momentum += s.density * s.mean_velocity;
    second_moment += s.density * (norm_sq(s.mean_velocity) + s.variance);
  }
  if (rho <= 0.0) return kEmpty;
  // Single population passes through exactly.
  if (contributing == 1) return last;

  const Vec2 mean = momentum / rho;
  // Jensen guarantees nonnegativity; rounding may not.
  const double variance = clamp_nonnegative(second_moment / rho - norm_sq(mean));
  return {rho, mean, variance};
}

// ---------------------------------------------------------------------------

GridField::GridField(Vec2 origin, double cell_size, std::size_t nx, std::size_t ny,
                     std::vector<double> density, std::vector<double> velocity_x,
                     std::vector<double> velocity_y, std::vector<double> variance)
    : origin_(origin),
      cell_size_(cell_size),
      nx_(nx),
      ny_(ny),
      density_(std::move(density)),
      velocity_x_(std::move(velocity_x)),
      velocity_y_(std::move(velocity_y)),
      variance_(std::move(variance)) {
  if (!is_finite(origin_)) throw ConfigError("grid origin must be finite");
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_))
    throw ConfigError("grid cell_size must be positive");
  if (nx_ < 2 || ny_ < 2) throw ConfigError("grid needs at least 2 nodes per axis");
  const std::size_t count = nx_ * ny_;
  if (density_.size() != count || velocity_x_.size() != count || velocity_y_.size() != count ||
      variance_.size() != count) {
    throw ConfigError("grid arrays must each hold nx*ny = " + std::to_string(count) + " values");
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::isfinite(density_[k]) || density_[k] < 0.0)
      throw ConfigError("grid density must be finite and >= 0 (node " + std::to_string(k) + ")");
    if (!std::isfinite(variance_[k]) || variance_[k] < 0.0)
      throw ConfigError("grid variance must be finite and >= 0 (node " + std::to_string(k) + ")");
    if (!std::isfinite(velocity_x_[k]) || !std::isfinite(velocity_y_[k]))
      throw ConfigError("grid velocity must be finite (node " + std::to_string(k) + ")");
  }
}

GridField GridField::bake(const CrowdFlow& flow, const Rect& bounds, double cell_size,
                          std::size_t max_nodes) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw ConfigError("bake cell_size must be positive");
  if (bounds.degenerate()) throw ConfigError("bake bounds are degenerate");

  // Small slack so an exact multiple of cell_size does not gain a spurious node.
  const double cx = std::ceil(bounds.width() / cell_size - 1e-9);
  const double cy = std::ceil(bounds.height() / cell_size - 1e-9);
  const double total = (cx + 1.0) * (cy + 1.0);
  if (total > static_cast<double>(max_nodes)) {
    throw ResourceError("baked grid would need " + std::to_string(static_cast<long long>(total)) +
                        " nodes, cap is " + std::to_string(max_nodes));
  }
  const auto nx = static_cast<std::size_t>(cx) + 1;
  const auto ny = static_cast<std::size_t>(cy) + 1;

  std::vector<double> rho(nx * ny), vx(nx * ny), vy(nx * ny), var(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Vec2 p{bounds.min.x + static_cast<double>(i) * cell_size,
                   bounds.min.y + static_cast<double>(j) * cell_size};
      const FlowSample s = flow.sample(p);
      const std::size_t k = j * nx + i;
      rho[k] = s.density;
      vx[k] = s.mean_velocity.x;
      vy[k] = s.mean_velocity.y;
      var[k] = s.variance;
    }
  }
  return GridField(bounds.min, cell_size, nx, ny, std::move(rho), std::move(vx), std::move(vy),
                   std::move(var));
}

Vec2 GridField::node_position(std::size_t i, std::size_t j) const {
  return {origin_.x + static_cast<double>(i) * cell_size_,
          origin_.y + static_cast<double>(j) * cell_size_};
}

FlowSample GridField::node(std::size_t i, std::size_t j) const {
  const std::size_t k = j * nx_ + i;
  return {density_[k], {velocity_x_[k], velocity_y_[k]}, variance_[k]};
}

FlowSample GridField::sample(Vec2 x) const {
  if (nx_ < 2 || ny_ < 2) return kEmpty;
  const double gx = (x.x - origin_.x) / cell_size_;
  const double gy = (x.y - origin_.y) / cell_size_;
  const auto max_i = static_cast<double>(nx_ - 1);
  const auto max_j = static_cast<double>(ny_ - 1);
  if (!(gx >= 0.0 && gx <= max_i && gy >= 0.0 && gy <= max_j)) return kEmpty;

  const auto i = std::min(static_cast<std::size_t>(gx), nx_ - 2);
  const auto j = std::min(static_cast<std::size_t>(gy), ny_ - 2);
  const double tx = gx - static_cast<double>(i);
  const double ty = gy - static_cast<double>(j);

  const std::size_t k00 = j * nx_ + i;
  const std::size_t k10 = k00 + 1;
  const std::size_t k01 = k00 + nx_;
  const std::size_t k11 = k01 + 1;
  auto lerp2 = [&](const std::vector<double>& a) {
    const double bottom = a[k00] + tx * (a[k10] - a[k00]);
    const double top = a[k01] + tx * (a[k11] - a[k01]);
    return bottom + ty * (top - bottom);
  };
  return {clamp_nonnegative(lerp2(density_)),
          {lerp2(velocity_x_), lerp2(velocity_y_)},
          clamp_nonnegative(lerp2(variance_))};
}

// ---------------------------------------------------------------------------

CrowdFlow::CrowdFlow(Rect bounds, Source source) : bounds_(bounds), source_(std::move(source)) {
  if (bounds_.degenerate() || !is_finite(bounds_.min) || !is_finite(bounds_.max))
    throw ConfigError("crowd flow bounds are degenerate");
  if (const auto* comps = std::get_if<Components>(&source_); comps && comps->empty())
    throw ConfigError("crowd flow needs at least one component flow");
}

CrowdFlow CrowdFlow::uniform(Rect bounds, double density, Vec2 mean_velocity, double variance) {
  ComponentFlow c{ConstantScalar{density}, UniformVelocity{mean_velocity}, ConstantScalar{variance},
                  std::nullopt};
  return CrowdFlow(bounds, Components{c});
}

FlowSample CrowdFlow::sample(Vec2 x) const {
  if (!bounds_.contains(x)) return kEmpty;
  return std::visit(overloaded{
                        [x](const Components& c) { return mixture(c, x); },
                        [x](const GridField& g) { return g.sample(x); },
                    },
                    source_);
}

}  // namespace crowdflow
