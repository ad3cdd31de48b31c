#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sdeclass {

/// Returns f(x) and writes the gradient into `grad`.
using SmoothObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Maps a point onto the feasible set in place (must be idempotent).
using Projection = std::function<void(std::span<double> x)>;

struct OptimizerOptions {
  int max_iters = 500;
  /// Stop when ||P(x - g) - x||_inf <= grad_tol.
  double grad_tol = 1e-5;
  /// Stop when (f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1) <= rel_tol.
  double rel_tol = 2.2e-9;
  int history = 10;
  double armijo = 1e-4;
  int max_backtracks = 40;
};

struct OptimizerResult {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// Objective after each accepted step, starting with the initial value.
  std::vector<double> trace;
};

/// Projected limited-memory BFGS with backtracking along the projection arc.
///
/// Each iteration computes the two-loop L-BFGS direction d (falling back to
/// -g when d is not a descent direction), then tries x(t) = P(x + t d) for
/// t = 1, 1/2, 1/4, ... until f(x(t)) <= f(x) + armijo * g.(x(t) - x). Only
/// strictly improving steps are accepted, so the trace is nonincreasing.
/// Throws std::domain_error if the objective is non-finite at the (projected)
/// starting point.
OptimizerResult minimize_projected_lbfgs(const SmoothObjective& objective, const Projection& project,
                                         std::vector<double> x0, const OptimizerOptions& options = {});

}  // namespace sdeclass
