#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "sdeclass/optimizer.hpp"
#include "sdeclass/splines.hpp"

using namespace sdeclass;

namespace {

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST(ProjectedLbfgs, UnconstrainedQuadratic) {
  const std::vector<double> target{1.0, -2.0, 3.0, 0.5};
  auto f = [&](std::span<const double> x, std::span<double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = 1.0 + i;
      g[i] = 2.0 * w * (x[i] - target[i]);
      v += w * (x[i] - target[i]) * (x[i] - target[i]);
    }
    return v;
  };
  const auto r = minimize_projected_lbfgs(f, [](std::span<double>) {}, std::vector<double>(4, 0.0));
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 0; i < target.size(); ++i) EXPECT_NEAR(r.x[i], target[i], 1e-5);
}

TEST(ProjectedLbfgs, Rosenbrock) {
  OptimizerOptions opt;
  opt.max_iters = 2000;
  opt.rel_tol = 0.0;
  opt.grad_tol = 1e-8;
  const auto r = minimize_projected_lbfgs(rosenbrock, [](std::span<double>) {}, {-1.2, 1.0}, opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(ProjectedLbfgs, BallConstraintActive) {
  // Minimize ||x - (3, 4)||^2 on the unit ball: solution (0.6, 0.8).
  auto f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * (x[0] - 3.0);
    g[1] = 2.0 * (x[1] - 4.0);
    return (x[0] - 3.0) * (x[0] - 3.0) + (x[1] - 4.0) * (x[1] - 4.0);
  };
  const auto r = minimize_projected_lbfgs(f, [](std::span<double> x) { project_ball_inplace(x, 1.0); }, {0.0, 0.0});
  EXPECT_NEAR(r.x[0], 0.6, 1e-6);
  EXPECT_NEAR(r.x[1], 0.8, 1e-6);
  EXPECT_LE(squared_norm(r.x), 1.0 + 1e-12);
}

TEST(ProjectedLbfgs, TraceIsStrictlyDecreasing) {
  OptimizerOptions opt;
  opt.max_iters = 300;
  const auto r = minimize_projected_lbfgs(rosenbrock, [](std::span<double> x) { project_ball_inplace(x, 4.0); },
                                          {-1.2, 1.0}, opt);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front(), r.initial_value);
  for (std::size_t i = 1; i < r.trace.size(); ++i) ASSERT_LT(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.back(), r.value);
}

TEST(ProjectedLbfgs, NonFiniteStart) {
  auto f = [](std::span<const double>, std::span<double> g) {
    g[0] = 0.0;
    return std::nan("");
  };
  EXPECT_THROW(minimize_projected_lbfgs(f, [](std::span<double>) {}, {0.0}), std::domain_error);
}
