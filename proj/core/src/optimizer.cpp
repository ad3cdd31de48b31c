#include "sdeclass/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace sdeclass {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> lbfgs_direction(const std::deque<Correction>& memory, std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * dot(memory[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * memory[i].y[j];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * dot(memory[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] += memory[i].s[j] * (alpha[i] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

OptimizerResult minimize_projected_lbfgs(const SmoothObjective& objective, const Projection& project,
                                         std::vector<double> x0, const OptimizerOptions& options) {
  const std::size_t dim = x0.size();
  OptimizerResult result;
  std::vector<double> x = std::move(x0);
  project(x);
  std::vector<double> g(dim);
  double f = objective(x, g);
  result.evaluations = 1;
  if (!std::isfinite(f)) throw std::domain_error("objective is not finite at the starting point");
  result.initial_value = f;
  result.trace.push_back(f);

  std::deque<Correction> memory;
  std::vector<double> trial(dim);
  std::vector<double> trial_grad(dim);
  std::vector<double> step(dim);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    for (std::size_t j = 0; j < dim; ++j) trial[j] = x[j] - g[j];
    project(trial);
    double pg = 0.0;
    for (std::size_t j = 0; j < dim; ++j) pg = std::max(pg, std::abs(trial[j] - x[j]));
    if (pg <= options.grad_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> d = lbfgs_direction(memory, g);
    if (!(dot(g, d) < 0.0)) {
      memory.clear();
      d = lbfgs_direction(memory, g);
    }
    double t = memory.empty() ? std::min(1.0, 1.0 / std::max(norm_inf(d), 1e-300)) : 1.0;

    bool accepted = false;
    double ft = f;
    for (int bt = 0; bt <= options.max_backtracks; ++bt, t *= 0.5) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = x[j] + t * d[j];
      project(trial);
      for (std::size_t j = 0; j < dim; ++j) step[j] = trial[j] - x[j];
      if (norm_inf(step) == 0.0) break;
      ft = objective(trial, trial_grad);
      ++result.evaluations;
      const double decrease = options.armijo * dot(g, step);
      if (std::isfinite(ft) && ft < f && ft <= f + std::min(decrease, 0.0)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      break;
    }

    Correction c{step, std::vector<double>(dim), 0.0};
    for (std::size_t j = 0; j < dim; ++j) c.y[j] = trial_grad[j] - g[j];
    const double sy = dot(c.s, c.y);
    if (sy > 1e-10 * std::sqrt(dot(c.s, c.s) * dot(c.y, c.y))) {
      c.rho = 1.0 / sy;
      memory.push_back(std::move(c));
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }

    const double rel = (f - ft) / std::max({std::abs(f), std::abs(ft), 1.0});
    x.swap(trial);
    g.swap(trial_grad);
    f = ft;
    result.trace.push_back(f);
    ++result.iterations;
    if (rel <= options.rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.x = std::move(x);
  result.value = f;
  return result;
}

}  // namespace sdeclass
