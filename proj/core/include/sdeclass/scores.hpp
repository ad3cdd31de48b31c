#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sdeclass/diffusion_sim.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/splines.hpp"

namespace sdeclass {

/// p_k exp(x_k) / sum_i p_i exp(x_i), computed after subtracting the largest
/// x_k among classes with p_k > 0. Throws ParameterError when the lengths
/// differ, a weight is negative, or every weight is zero.
std::vector<double> softmax_weighted(std::span<const double> x, std::span<const double> p);

/// Same as softmax_weighted, writing into `out` (no allocation, no checks).
void softmax_weighted_into(std::span<const double> x, std::span<const double> p, std::span<double> out) noexcept;

/// Discretized log-likelihood ratio of drift b against the driftless reference:
///
///   sum_{i<n} (b / s)(X_i) (X_{i+1} - X_i) - (delta / 2) sum_{i<n} (b^2 / s)(X_i)
///
/// where s = sigma2 is the squared diffusion coefficient. Throws
/// EvaluationError if sigma2 is not strictly positive at a visited point.
template <class Drift, class Sigma2>
double girsanov_functional(const Path& path, Drift&& b, Sigma2&& sigma2) {
  const auto& x = path.values;
  double ito = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double s = sigma2(x[i]);
    if (!(s > 0.0))
      throw EvaluationError("squared diffusion is not positive at grid point " + std::to_string(i));
    const double bi = b(x[i]);
    ito += bi / s * (x[i + 1] - x[i]);
    quad += bi * bi / s;
  }
  return ito - 0.5 * path.delta * quad;
}

/// Spline-parameterized score: K drift candidates in S_{D1}, one floored
/// squared-diffusion candidate in S~_{D2}, and class weights.
struct ScoreParams {
  SplineBasis drift_basis;
  SplineBasis diffusion_basis;
  std::vector<DriftCoeffs> drift;
  DiffusionCoeffs diffusion;
  std::vector<double> weights;

  int num_classes() const noexcept { return static_cast<int>(drift.size()); }

  /// Checks coefficient lengths against the bases, the diffusion floor, and
  /// that weights form a probability vector (sum within 1e-10).
  void validate() const;
};

/// Zero drifts, sigma~^2 = 1 on the support, floor 1/log(N), support [-log N, log N].
ScoreParams neutral_params(int num_classes, int order, int drift_dim, int diffusion_dim,
                           std::size_t sample_size, std::vector<double> weights);

/// The K functionals F_k of `params` on `path`.
std::vector<double> girsanov_functionals(const ScoreParams& params, const Path& path);

std::vector<double> posterior(const ScoreParams& params, const Path& path);

/// 2 * posterior - 1, entrywise.
std::vector<double> score_from_posterior(std::span<const double> posterior);

std::vector<double> score(const ScoreParams& params, const Path& path);

/// 1-based index of the largest entry; the lowest index wins ties.
int argmax_class(std::span<const double> scores);

int classify(const ScoreParams& params, const Path& path);

/// Bayes classifier built from the true model functions.
struct OracleScore {
  ModelSpec model;
};

std::vector<double> oracle_posterior(const OracleScore& oracle, const Path& path);
int oracle_classify(const OracleScore& oracle, const Path& path);

/// (1/sqrt 2) sqrt(excess) : bound on the excess 0-1 risk implied by an excess
/// L2 risk. Throws ParameterError for negative input.
double zhang_gap(double l2_excess);

}  // namespace sdeclass
