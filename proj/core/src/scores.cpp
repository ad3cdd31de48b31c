#include "sdeclass/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sdeclass {

void softmax_weighted_into(std::span<const double> x, std::span<const double> p,
                           std::span<double> out) noexcept {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k)
    if (p[k] > 0.0) top = std::max(top, x[k]);
  double total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k] = p[k] > 0.0 ? p[k] * std::exp(x[k] - top) : 0.0;
    total += out[k];
  }
  for (std::size_t k = 0; k < x.size(); ++k) out[k] /= total;
}

std::vector<double> softmax_weighted(std::span<const double> x, std::span<const double> p) {
  if (x.size() != p.size()) throw ParameterError("softmax: scores and weights differ in length");
  bool any_positive = false;
  for (double w : p) {
    if (!(w >= 0.0)) throw ParameterError("softmax: weights must be nonnegative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw ParameterError("softmax: all weights are zero");
  std::vector<double> out(x.size());
  softmax_weighted_into(x, p, out);
  return out;
}

void ScoreParams::validate() const {
  if (drift.empty()) throw ParameterError("score needs at least one class");
  if (weights.size() != drift.size())
    throw ParameterError("score has " + std::to_string(drift.size()) + " drifts but " +
                         std::to_string(weights.size()) + " weights");
  for (const auto& d : drift)
    if (d.a.size() != drift_basis.size())
      throw ParameterError("drift coefficient length does not match the drift basis");
  if (diffusion.alpha.size() != diffusion_basis.size())
    throw ParameterError("diffusion coefficient length does not match the diffusion basis");
  if (!(diffusion.floor > 0.0)) throw ParameterError("diffusion floor must be > 0");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("class weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ParameterError("class weights must sum to 1");
}

ScoreParams neutral_params(int num_classes, int order, int drift_dim, int diffusion_dim,
                           std::size_t sample_size, std::vector<double> weights) {
  if (num_classes < 1) throw ParameterError("K must be >= 1");
  if (sample_size < 2) throw ParameterError("sample size must be >= 2 (support is [-log N, log N])");
  const double logn = std::log(static_cast<double>(sample_size));
  ScoreParams params{SplineBasis(order, drift_dim, logn), SplineBasis(order, diffusion_dim, logn),
                     {}, {}, std::move(weights)};
  params.drift.assign(static_cast<std::size_t>(num_classes),
                      DriftCoeffs{std::vector<double>(params.drift_basis.size(), 0.0)});
  params.diffusion.alpha.assign(params.diffusion_basis.size(), 1.0);
  params.diffusion.floor = 1.0 / logn;
  params.validate();
  return params;
}

std::vector<double> girsanov_functionals(const ScoreParams& params, const Path& path) {
  const std::size_t k_count = params.drift.size();
  const int m1 = params.drift_basis.order();
  const int m2 = params.diffusion_basis.order();
  std::vector<double> ito(k_count, 0.0);
  std::vector<double> quad(k_count, 0.0);
  double bvals[SplineBasis::kMaxOrder + 1];
  double svals[SplineBasis::kMaxOrder + 1];
  const auto& x = path.values;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const int first = params.drift_basis.eval_local(x[i], bvals);
    if (first < 0) continue;  // every drift is 0 off the support
    double s = 0.0;
    const int sfirst = params.diffusion_basis.eval_local(x[i], svals);
    if (sfirst >= 0)
      for (int q = 0; q <= m2; ++q) s += params.diffusion.alpha[static_cast<std::size_t>(sfirst + q)] * svals[q];
    s = std::max(s, params.diffusion.floor);
    const double dx = x[i + 1] - x[i];
    for (std::size_t k = 0; k < k_count; ++k) {
      const auto& a = params.drift[k].a;
      double b = 0.0;
      for (int q = 0; q <= m1; ++q) b += a[static_cast<std::size_t>(first + q)] * bvals[q];
      ito[k] += b / s * dx;
      quad[k] += b * b / s;
    }
  }
  for (std::size_t k = 0; k < k_count; ++k) ito[k] -= 0.5 * path.delta * quad[k];
  return ito;
}

std::vector<double> posterior(const ScoreParams& params, const Path& path) {
  const auto f = girsanov_functionals(params, path);
  return softmax_weighted(f, params.weights);
}

std::vector<double> score_from_posterior(std::span<const double> posterior) {
  std::vector<double> h(posterior.size());
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = 2.0 * posterior[k] - 1.0;
  return h;
}

std::vector<double> score(const ScoreParams& params, const Path& path) {
  return score_from_posterior(posterior(params, path));
}

int argmax_class(std::span<const double> scores) {
  if (scores.empty()) throw ParameterError("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k)
    if (scores[k] > scores[best]) best = k;
  return static_cast<int>(best) + 1;
}

int classify(const ScoreParams& params, const Path& path) {
  return argmax_class(score(params, path));
}

std::vector<double> oracle_posterior(const OracleScore& oracle, const Path& path) {
  const ModelSpec& m = oracle.model;
  const std::size_t k_count = m.drifts.size();
  std::vector<double> ito(k_count, 0.0);
  std::vector<double> quad(k_count, 0.0);
  const auto& x = path.values;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double sigma = m.diffusion(x[i]);
    const double s = sigma * sigma;
    if (!(s > 0.0))
      throw EvaluationError("squared diffusion is not positive at grid point " + std::to_string(i));
    const double dx = x[i + 1] - x[i];
    for (std::size_t k = 0; k < k_count; ++k) {
      const double b = m.drifts[k](x[i]);
      ito[k] += b / s * dx;
      quad[k] += b * b / s;
    }
  }
  for (std::size_t k = 0; k < k_count; ++k) ito[k] -= 0.5 * path.delta * quad[k];
  return softmax_weighted(ito, m.class_probs);
}

int oracle_classify(const OracleScore& oracle, const Path& path) {
  return argmax_class(oracle_posterior(oracle, path));
}

double zhang_gap(double l2_excess) {
  if (!(l2_excess >= 0.0)) throw ParameterError("excess L2 risk must be nonnegative");
  return std::sqrt(l2_excess) / std::sqrt(2.0);
}

}  // namespace sdeclass
