#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "crowdflow/error.hpp"
#include "crowdflow/flowfield.hpp"

namespace crowdflow {
namespace {

constexpr Rect kBox{{0.0, 0.0}, {20.0, 20.0}};

ComponentFlow component(double rho, Vec2 v, double var = 0.0) {
  return {ConstantScalar{rho}, UniformVelocity{v}, ConstantScalar{var}, std::nullopt};
}

TEST(FlowSample, UniformFlowInteriorQuery) {
  const auto flow = CrowdFlow::uniform(kBox, 1.0, {1.0, 0.0}, 0.25);
  const FlowSample s = flow.sample({7.3, 12.1});
  EXPECT_EQ(s.density, 1.0);
  EXPECT_EQ(s.mean_velocity, (Vec2{1.0, 0.0}));
  EXPECT_EQ(s.variance, 0.25);
}

TEST(FlowSample, OutsideWorkspaceIsEmpty) {
  const auto flow = CrowdFlow::uniform(kBox, 1.0, {1.0, 0.0}, 0.25);
  EXPECT_EQ(flow.sample({1000.0, 10.0}), FlowSample{});
  EXPECT_EQ(flow.sample({10.0, -1000.0}), FlowSample{});
}

TEST(FlowSample, GaussianBumpPeak) {
  const GaussianBump bump{{10.0, 10.0}, 3.0, 0.5, 1.5};
  EXPECT_DOUBLE_EQ(evaluate(bump, {10.0, 10.0}), 1.5);
  EXPECT_NEAR(evaluate(bump, {10.0, 40.0}), 0.5, 1e-12);
}

TEST(Mixture, OpposingFlowsCancelMeanAndCarryVariance) {
  const std::vector<ComponentFlow> parts{component(1.0, {0.0, 1.0}), component(1.0, {0.0, -1.0})};
  const FlowSample s = mixture(parts, {3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.density, 2.0);
  EXPECT_DOUBLE_EQ(s.mean_velocity.x, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_velocity.y, 0.0);
  EXPECT_DOUBLE_EQ(s.variance, 1.0);
}

TEST(Mixture, SingleComponentIsIdentity) {
  const std::vector<ComponentFlow> parts{component(0.7, {1.0, 0.0}, 0.2)};
  const FlowSample s = mixture(parts, {1.0, 1.0});
  EXPECT_EQ(s, (FlowSample{0.7, {1.0, 0.0}, 0.2}));
}

TEST(Mixture, ThreeComponentsMatchMonteCarloMoments) {
  const std::vector<ComponentFlow> parts{component(1.0, {0.0, 1.0}), component(2.0, {0.0, -1.0}),
                                         component(1.0, {0.0, 0.0})};
  // Oracle: draw pedestrians with probability rho_i / rho and measure the
  // empirical mean and scalar variance of their velocities.
  std::mt19937_64 rng(99);
  std::discrete_distribution<int> pick({1.0, 2.0, 1.0});
  const Vec2 velocities[3] = {{0.0, 1.0}, {0.0, -1.0}, {0.0, 0.0}};
  constexpr int draws = 400000;
  Vec2 sum;
  double sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const Vec2 v = velocities[pick(rng)];
    sum += v;
    sum_sq += norm_sq(v);
  }
  const Vec2 mc_mean = sum / draws;
  const double mc_var = sum_sq / draws - norm_sq(mc_mean);
  EXPECT_NEAR(mc_mean.y, -0.25, 5e-3);
  EXPECT_NEAR(mc_var, 0.6875, 5e-3);

  const FlowSample s = mixture(parts, {5.0, 5.0});
  EXPECT_DOUBLE_EQ(s.density, 4.0);
  EXPECT_NEAR(s.mean_velocity.x, 0.0, 1e-15);
  EXPECT_NEAR(s.mean_velocity.y, -0.25, 1e-15);
  EXPECT_NEAR(s.variance, 0.6875, 1e-12);  // 3/4 - 1/16
}

TEST(Mixture, EmptyListIsConfigError) {
  EXPECT_THROW(mixture(std::vector<ComponentFlow>{}, {0.0, 0.0}), ConfigError);
  EXPECT_THROW(CrowdFlow(kBox, CrowdFlow::Components{}), ConfigError);
}

TEST(Mixture, SupportRestrictsDensity) {
  ComponentFlow lane = component(2.0, {1.0, 0.0});
  lane.support = Rect{{0.0, 0.0}, {5.0, 5.0}};
  const std::vector<ComponentFlow> parts{lane, component(1.0, {0.0, 0.0}, 0.5)};
  EXPECT_DOUBLE_EQ(mixture(parts, {2.0, 2.0}).density, 3.0);
  EXPECT_EQ(mixture(parts, {8.0, 8.0}), (FlowSample{1.0, {0.0, 0.0}, 0.5}));
}

std::vector<ComponentFlow> random_components(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> pos(0.0, 20.0), vel(-2.0, 2.0), pos01(0.0, 1.0);
  std::vector<ComponentFlow> parts;
  for (int k = 0; k < count; ++k) {
    ComponentFlow c;
    switch (k % 3) {
      case 0:
        c.density = GaussianBump{{pos(rng), pos(rng)}, 1.0 + 3.0 * pos01(rng), 0.1 * pos01(rng),
                                 2.0 * pos01(rng)};
        c.velocity = Circulation{{pos(rng), pos(rng)}, vel(rng)};
        break;
      case 1:
        c.density = LinearRamp{Axis::Y, 0.0, 20.0, pos01(rng), pos01(rng)};
        c.velocity = Toward{{pos(rng), pos(rng)}, std::abs(vel(rng))};
        c.variance = ConstantScalar{pos01(rng)};
        break;
      default:
        c.density = ConstantScalar{pos01(rng)};
        c.velocity = Vortex{{pos(rng), pos(rng)}, 0.2 * vel(rng)};
        c.variance = GaussianBump{{pos(rng), pos(rng)}, 2.0, 0.0, pos01(rng)};
    }
    parts.push_back(c);
  }
  return parts;
}

TEST(MixtureProperty, DensityAndVarianceNonnegative) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-2.0, 22.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto parts = random_components(rng, 5);
    const CrowdFlow flow(kBox, parts);
    for (int q = 0; q < 100; ++q) {
      const FlowSample s = flow.sample({pos(rng), pos(rng)});
      ASSERT_GE(s.density, 0.0);
      ASSERT_GE(s.variance, 0.0);
    }
  }
}

TEST(MixtureProperty, PermutationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto parts = random_components(rng, 6);
    const Vec2 x{pos(rng), pos(rng)};
    const FlowSample a = mixture(parts, x);
    std::shuffle(parts.begin(), parts.end(), rng);
    const FlowSample b = mixture(parts, x);
    ASSERT_NEAR(a.density, b.density, 1e-12);
    ASSERT_NEAR(a.mean_velocity.x, b.mean_velocity.x, 1e-12);
    ASSERT_NEAR(a.mean_velocity.y, b.mean_velocity.y, 1e-12);
    ASSERT_NEAR(a.variance, b.variance, 1e-12);
  }
}

TEST(VelocityPrimitives, CirculationIsTangentWithConstantSpeed) {
  const Circulation c{{10.0, 10.0}, 1.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 x{pos(rng), pos(rng)};
    const Vec2 v = evaluate(c, x);
    EXPECT_NEAR(norm(v), 1.0, 1e-12);
    EXPECT_NEAR(dot(v, x - c.center) / norm(x - c.center), 0.0, 1e-12);
    EXPECT_GT(cross(x - c.center, v), 0.0);  // counter-clockwise
  }
  EXPECT_EQ(evaluate(c, {10.0, 10.0}), Vec2{});
}

TEST(VelocityPrimitives, VortexAndToward) {
  EXPECT_EQ(evaluate(Vortex{{1.0, 1.0}, 2.0}, {2.0, 1.0}), (Vec2{0.0, 2.0}));
  const Vec2 v = evaluate(Toward{{10.0, 0.0}, 1.5}, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(v.x, 1.5);
  EXPECT_DOUBLE_EQ(v.y, 0.0);
  EXPECT_EQ(evaluate(Toward{{1.0, 1.0}, 1.0}, {1.0, 1.0}), Vec2{});
}

TEST(LinearRamp, ClampsBeyondEnds) {
  const LinearRamp r{Axis::X, 0.0, 20.0, 0.1, 0.5};
  EXPECT_DOUBLE_EQ(evaluate(r, {-5.0, 0.0}), 0.1);
  EXPECT_DOUBLE_EQ(evaluate(r, {10.0, 0.0}), 0.3);
  EXPECT_DOUBLE_EQ(evaluate(r, {25.0, 0.0}), 0.5);
}

// --------------------------------------------------------------------- grid

GridField small_grid() {
  // 3 x 2 nodes, cell 1 m, origin (0, 0).
  return GridField({0.0, 0.0}, 1.0, 3, 2, {0.0, 0.0, 2.0, 1.0, 1.0, 2.0},
                   {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0},
                   {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
}

TEST(GridField, NodeQueriesReturnStoredValues) {
  const GridField g = small_grid();
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) EXPECT_EQ(g.sample(g.node_position(i, j)), g.node(i, j));
}

TEST(GridField, CellCenterIsBilinearMidpoint) {
  const GridField g = small_grid();
  // Corners of cell (0,0): rho = 0, 0 (bottom), 1, 1 (top); vx = 1, 2, 4, 5.
  EXPECT_DOUBLE_EQ(g.sample({0.5, 0.5}).density, 0.5);
  EXPECT_DOUBLE_EQ(g.sample({0.5, 0.5}).mean_velocity.x, 3.0);
}

TEST(GridField, OutsideExtentIsEmpty) {
  const GridField g = small_grid();
  EXPECT_EQ(g.sample({-0.01, 0.5}), FlowSample{});
  EXPECT_EQ(g.sample({2.01, 0.5}), FlowSample{});
  EXPECT_EQ(g.sample({1.0, 1.5}), FlowSample{});
}

TEST(GridField, RejectsBadConstruction) {
  EXPECT_THROW(GridField({0, 0}, 1.0, 1, 2, {0, 0}, {0, 0}, {0, 0}, {0, 0}), ConfigError);
  EXPECT_THROW(GridField({0, 0}, 0.0, 2, 2, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}),
               ConfigError);
  EXPECT_THROW(GridField({0, 0}, 1.0, 2, 2, {0, 0, -1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}),
               ConfigError);
  EXPECT_THROW(GridField({0, 0}, 1.0, 2, 2, {0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}),
               ConfigError);
}

TEST(GridField, ContinuousAcrossCellBoundaries) {
  const CrowdFlow bump(kBox, CrowdFlow::Components{{GaussianBump{{10.0, 10.0}, 3.0, 0.5, 1.5},
                                                    Vortex{{10.0, 10.0}, 0.3}, ConstantScalar{1.0},
                                                    std::nullopt}});
  const GridField g = GridField::bake(bump, kBox, 0.5);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cell(1, 38);
  std::uniform_real_distribution<double> frac(0.0, 0.5);
  for (double eps : {1e-3, 1e-6}) {
    for (int k = 0; k < 200; ++k) {
      const double x = 0.5 * cell(rng);  // a vertical cell boundary
      const double y = 0.5 * cell(rng) + frac(rng);
      const FlowSample a = g.sample({x - eps, y});
      const FlowSample b = g.sample({x + eps, y});
      EXPECT_LT(std::abs(a.density - b.density), 10.0 * eps);
      EXPECT_LT(norm(a.mean_velocity - b.mean_velocity), 10.0 * eps);
    }
  }
}

TEST(GridBake, NodesMatchSourceAndUniformIsFlat) {
  const auto uniform = CrowdFlow::uniform(kBox, 1.0, {0.3, -0.2}, 0.4);
  const GridField g = GridField::bake(uniform, kBox, 2.0);
  EXPECT_EQ(g.nx(), 11u);
  EXPECT_EQ(g.ny(), 11u);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      EXPECT_EQ(g.node(i, j), uniform.sample(g.node_position(i, j)));
      EXPECT_EQ(g.node(i, j), g.node(0, 0));
    }
  }
}

TEST(GridBake, BumpWithinBilinearErrorBound) {
  constexpr double amplitude = 1.0;  // peak - floor
  constexpr double std_dev = 3.0;
  constexpr double h = 0.1;
  const CrowdFlow bump(kBox, CrowdFlow::Components{{GaussianBump{{10.0, 10.0}, std_dev, 0.5, 1.5},
                                                    UniformVelocity{}, ConstantScalar{1.0},
                                                    std::nullopt}});
  const GridField g = GridField::bake(bump, kBox, h);
  for (std::size_t j = 0; j < g.ny(); j += 17) {
    for (std::size_t i = 0; i < g.nx(); i += 13) {
      const Vec2 x = g.node_position(i, j);
      EXPECT_EQ(g.node(i, j), bump.sample(x));
      // Position -> cell index round-off may land on the neighbouring cell.
      EXPECT_NEAR(g.sample(x).density, g.node(i, j).density, 1e-14);
    }
  }

  // Bilinear error <= h^2/8 (max|f_xx| + max|f_yy|); both maxima are A/s^2 at the center.
  const double bound = h * h / 8.0 * 2.0 * amplitude / (std_dev * std_dev);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vec2 x{pos(rng), pos(rng)};
    worst = std::max(worst, std::abs(g.sample(x).density - bump.sample(x).density));
  }
  EXPECT_LT(worst, bound);
}

TEST(GridBake, NodeCapIsResourceError) {
  const auto uniform = CrowdFlow::uniform(kBox, 1.0, {}, 0.0);
  EXPECT_THROW(GridField::bake(uniform, kBox, 0.001), ResourceError);
  EXPECT_THROW(GridField::bake(uniform, kBox, 0.5, 100), ResourceError);
  EXPECT_NO_THROW(GridField::bake(uniform, kBox, 0.5, 41 * 41));
}

TEST(CrowdFlow, GridSourceRespectsWorkspace) {
  const auto uniform = CrowdFlow::uniform(kBox, 1.0, {1.0, 0.0}, 0.1);
  const CrowdFlow gridded(Rect{{0.0, 0.0}, {10.0, 10.0}}, GridField::bake(uniform, kBox, 1.0));
  EXPECT_EQ(gridded.sample({5.0, 5.0}), (FlowSample{1.0, {1.0, 0.0}, 0.1}));
  EXPECT_EQ(gridded.sample({15.0, 5.0}), FlowSample{});
}

}  // namespace
}  // namespace crowdflow
