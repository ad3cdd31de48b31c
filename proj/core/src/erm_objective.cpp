#include "sdeclass/erm_objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdeclass/errors.hpp"

namespace sdeclass {

ErmObjective::ErmObjective(const LabeledDataset& data, SplineBasis drift_basis,
                           SplineBasis diffusion_basis, std::vector<double> weights, double floor)
    : data_(&data),
      drift_basis_(std::move(drift_basis)),
      diffusion_basis_(std::move(diffusion_basis)),
      weights_(std::move(weights)),
      floor_(floor),
      num_classes_(data.num_classes),
      steps_(data.steps),
      drift_width_(drift_basis_.order() + 1),
      diffusion_width_(diffusion_basis_.order() + 1) {
  if (data.size() == 0) throw ParameterError("empirical risk needs a nonempty dataset");
  if (static_cast<int>(weights_.size()) != num_classes_)
    throw ParameterError("weights have length " + std::to_string(weights_.size()) + ", dataset has K = " +
                         std::to_string(num_classes_));
  if (!(floor_ > 0.0)) throw ParameterError("diffusion floor must be > 0");

  const std::size_t cells = data.size() * static_cast<std::size_t>(steps_);
  drift_first_.resize(cells);
  diffusion_first_.resize(cells);
  drift_values_.assign(cells * static_cast<std::size_t>(drift_width_), 0.0);
  diffusion_values_.assign(cells * static_cast<std::size_t>(diffusion_width_), 0.0);
  increments_.resize(cells);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto& v = data.paths[j].values;
    if (v.size() != static_cast<std::size_t>(steps_) + 1)
      throw ParameterError("path " + std::to_string(j) + " is not on the dataset grid");
    for (int i = 0; i < steps_; ++i) {
      const std::size_t c = j * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(i);
      const double xi = v[static_cast<std::size_t>(i)];
      drift_first_[c] = drift_basis_.eval_local(
          xi, std::span<double>(drift_values_).subspan(c * static_cast<std::size_t>(drift_width_), drift_width_));
      diffusion_first_[c] = diffusion_basis_.eval_local(
          xi, std::span<double>(diffusion_values_)
                  .subspan(c * static_cast<std::size_t>(diffusion_width_), diffusion_width_));
      increments_[c] = v[static_cast<std::size_t>(i) + 1] - xi;
    }
  }
}

std::size_t ErmObjective::num_parameters() const noexcept {
  return static_cast<std::size_t>(num_classes_) * drift_basis_.size() + diffusion_basis_.size();
}

std::vector<double> ErmObjective::pack(const ScoreParams& params) const {
  if (params.num_classes() != num_classes_) throw ParameterError("score and dataset differ in K");
  if (!(params.drift_basis == drift_basis_) || !(params.diffusion_basis == diffusion_basis_))
    throw ParameterError("score bases do not match the objective");
  std::vector<double> x;
  x.reserve(num_parameters());
  for (const auto& d : params.drift) {
    if (d.a.size() != drift_basis_.size()) throw ParameterError("drift coefficient length mismatch");
    x.insert(x.end(), d.a.begin(), d.a.end());
  }
  if (params.diffusion.alpha.size() != diffusion_basis_.size())
    throw ParameterError("diffusion coefficient length mismatch");
  x.insert(x.end(), params.diffusion.alpha.begin(), params.diffusion.alpha.end());
  return x;
}

ScoreParams ErmObjective::unpack(std::span<const double> x) const {
  if (x.size() != num_parameters()) throw ParameterError("parameter vector has the wrong length");
  ScoreParams params{drift_basis_, diffusion_basis_, {}, {}, weights_};
  const std::size_t nb = drift_basis_.size();
  for (int k = 0; k < num_classes_; ++k) {
    auto block = x.subspan(static_cast<std::size_t>(k) * nb, nb);
    params.drift.push_back(DriftCoeffs{std::vector<double>(block.begin(), block.end())});
  }
  auto tail = x.subspan(static_cast<std::size_t>(num_classes_) * nb);
  params.diffusion.alpha.assign(tail.begin(), tail.end());
  params.diffusion.floor = floor_;
  return params;
}

double ErmObjective::value(std::span<const double> x) const { return evaluate(x, nullptr); }

double ErmObjective::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
  if (grad.size() != num_parameters()) throw ParameterError("gradient buffer has the wrong length");
  std::fill(grad.begin(), grad.end(), 0.0);
  return evaluate(x, grad.data());
}

void ErmObjective::project(std::span<double> x, double drift_radius2, double diffusion_radius2) const {
  const std::size_t nb = drift_basis_.size();
  for (int k = 0; k < num_classes_; ++k)
    project_ball_inplace(x.subspan(static_cast<std::size_t>(k) * nb, nb), drift_radius2);
  project_ball_inplace(x.subspan(static_cast<std::size_t>(num_classes_) * nb), diffusion_radius2);
}

double ErmObjective::evaluate(std::span<const double> x, double* grad) const {
  if (x.size() != num_parameters()) throw ParameterError("parameter vector has the wrong length");
  const std::size_t K = static_cast<std::size_t>(num_classes_);
  const std::size_t nb = drift_basis_.size();
  const std::size_t n = static_cast<std::size_t>(steps_);
  const std::size_t w1 = static_cast<std::size_t>(drift_width_);
  const std::size_t w2 = static_cast<std::size_t>(diffusion_width_);
  const double* alpha = x.data() + K * nb;
  const double delta = data_->delta;
  const double inv_n = 1.0 / static_cast<double>(data_->size());

  std::vector<double> f(K);
  std::vector<double> post(K);
  std::vector<double> dldf(K);
  // Per-step caches for the backward pass.
  std::vector<double> drift_at(n * K);
  std::vector<double> inv_s(n);
  std::vector<char> active(n);

  double total = 0.0;
  for (std::size_t j = 0; j < data_->size(); ++j) {
    const std::size_t base = j * n;
    std::fill(f.begin(), f.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = base + i;
      const int first = drift_first_[c];
      if (first < 0) {
        inv_s[i] = 0.0;
        continue;
      }
      double s = 0.0;
      const int sfirst = diffusion_first_[c];
      if (sfirst >= 0) {
        const double* sv = &diffusion_values_[c * w2];
        for (std::size_t q = 0; q < w2; ++q) s += alpha[static_cast<std::size_t>(sfirst) + q] * sv[q];
      }
      active[i] = sfirst >= 0 && s >= floor_;
      s = std::max(s, floor_);
      const double r = 1.0 / s;
      inv_s[i] = r;
      const double dx = increments_[c];
      const double* bv = &drift_values_[c * w1];
      for (std::size_t k = 0; k < K; ++k) {
        const double* a = x.data() + k * nb + static_cast<std::size_t>(first);
        double b = 0.0;
        for (std::size_t q = 0; q < w1; ++q) b += a[q] * bv[q];
        drift_at[i * K + k] = b;
        f[k] += r * b * (dx - 0.5 * delta * b);
      }
    }

    softmax_weighted_into(f, weights_, post);
    const int label = data_->labels[j];
    double loss = 0.0;
    double gbar = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double z = static_cast<int>(k) + 1 == label ? 1.0 : -1.0;
      const double resid = z - (2.0 * post[k] - 1.0);
      loss += resid * resid;
      dldf[k] = -4.0 * resid;  // d loss / d posterior_k
      gbar += dldf[k] * post[k];
    }
    total += loss;
    if (grad == nullptr) continue;

    for (std::size_t k = 0; k < K; ++k) dldf[k] = post[k] * (dldf[k] - gbar) * inv_n;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = base + i;
      const int first = drift_first_[c];
      if (first < 0) continue;
      const double r = inv_s[i];
      const double dx = increments_[c];
      const double* bv = &drift_values_[c * w1];
      double dfdr = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double b = drift_at[i * K + k];
        const double coef = dldf[k] * r * (dx - delta * b);
        double* ga = grad + k * nb + static_cast<std::size_t>(first);
        for (std::size_t q = 0; q < w1; ++q) ga[q] += coef * bv[q];
        dfdr += dldf[k] * b * (dx - 0.5 * delta * b);
      }
      if (active[i]) {
        const double ds = -dfdr * r * r;
        const double* sv = &diffusion_values_[c * w2];
        double* gs = grad + K * nb + static_cast<std::size_t>(diffusion_first_[c]);
        for (std::size_t q = 0; q < w2; ++q) gs[q] += ds * sv[q];
      }
    }
  }
  return total * inv_n;
}

}  // namespace sdeclass
