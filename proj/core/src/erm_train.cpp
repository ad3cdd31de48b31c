#include "sdeclass/erm_train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "json_support.hpp"
#include "sdeclass/erm_objective.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/optimizer.hpp"
#include "sdeclass/rng.hpp"

namespace sdeclass {

void TrainConfig::validate() const {
  if (drift_dim < 1 || diffusion_dim < 1) throw ParameterError("spline dimensions must be >= 1");
  if (order < 1) throw ParameterError("spline order must be >= 1");
  if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw ParameterError("grad_tol must be > 0");
  if (n_restarts < 1) throw ParameterError("n_restarts must be >= 1");
  if (!(init_scale >= 0.0)) throw ParameterError("init_scale must be >= 0");
}

std::vector<double> estimate_weights(std::span<const int> labels, int num_classes) {
  if (labels.empty()) throw ParameterError("cannot estimate class weights from an empty sample");
  if (num_classes < 1) throw ParameterError("K must be >= 1");
  std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
  for (int y : labels) {
    if (y < 1 || y > num_classes) throw ParameterError("label " + std::to_string(y) + " outside 1..K");
    counts[static_cast<std::size_t>(y - 1)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(labels.size());
  return counts;
}

double l2_risk(std::span<const double> scores, std::span<const int> labels, int num_classes) {
  const std::size_t K = static_cast<std::size_t>(num_classes);
  if (labels.empty()) throw ParameterError("risk of an empty sample");
  if (scores.size() != labels.size() * K) throw ParameterError("score matrix is not N x K");
  double total = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j)
    for (std::size_t k = 0; k < K; ++k) {
      const double z = static_cast<int>(k) + 1 == labels[j] ? 1.0 : -1.0;
      const double r = z - scores[j * K + k];
      total += r * r;
    }
  return total / static_cast<double>(labels.size());
}

double empirical_risk(const ScoreParams& params, const LabeledDataset& data) {
  if (params.num_classes() != data.num_classes)
    throw ParameterError("score has K = " + std::to_string(params.num_classes()) + ", dataset has K = " +
                         std::to_string(data.num_classes));
  std::vector<double> scores;
  scores.reserve(data.size() * static_cast<std::size_t>(data.num_classes));
  for (const auto& path : data.paths) {
    const auto h = score(params, path);
    scores.insert(scores.end(), h.begin(), h.end());
  }
  return l2_risk(scores, data.labels, data.num_classes);
}

RiskGradient risk_gradient(const ScoreParams& params, const LabeledDataset& data) {
  if (params.num_classes() != data.num_classes) throw ParameterError("score and dataset differ in K");
  ErmObjective objective(data, params.drift_basis, params.diffusion_basis, params.weights,
                         params.diffusion.floor);
  const auto x = objective.pack(params);
  std::vector<double> g(x.size());
  objective.value_and_gradient(x, g);
  RiskGradient out;
  const std::size_t nb = params.drift_basis.size();
  for (int k = 0; k < params.num_classes(); ++k)
    out.drift.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(k * nb),
                           g.begin() + static_cast<std::ptrdiff_t>((k + 1) * nb));
  out.diffusion.assign(g.begin() + static_cast<std::ptrdiff_t>(params.num_classes() * nb), g.end());
  return out;
}

FittedScore train_erm(const LabeledDataset& data, const TrainConfig& config,
                      std::optional<std::span<const int>> weight_labels) {
  config.validate();
  if (data.size() < 2) throw ParameterError("training needs at least two paths");
  if (config.split_weights && !weight_labels)
    throw ParameterError("split_weights is set but no weight sample was given");

  auto weights = config.split_weights ? estimate_weights(*weight_labels, data.num_classes)
                                      : estimate_weights(data.labels, data.num_classes);
  const ScoreParams start = neutral_params(data.num_classes, config.order, config.drift_dim,
                                           config.diffusion_dim, data.size(), std::move(weights));
  const ErmObjective objective(data, start.drift_basis, start.diffusion_basis, start.weights,
                               start.diffusion.floor);
  const double drift_r2 = coefficient_radius2(config.drift_dim, config.order, data.size());
  const double diffusion_r2 = coefficient_radius2(config.diffusion_dim, config.order, data.size());

  SmoothObjective f = [&objective](std::span<const double> x, std::span<double> g) {
    return objective.value_and_gradient(x, g);
  };
  Projection project = [&](std::span<double> x) {
    if (config.project) objective.project(x, drift_r2, diffusion_r2);
  };
  OptimizerOptions options;
  options.max_iters = config.max_iters;
  options.grad_tol = config.grad_tol;

  const std::vector<double> neutral = objective.pack(start);
  std::optional<OptimizerResult> best;
  for (int r = 0; r < config.n_restarts; ++r) {
    std::vector<double> x0 = neutral;
    if (r > 0 && config.init_scale > 0.0) {
      Engine rng = make_stream(config.seed, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> jitter(0.0, config.init_scale);
      for (double& v : x0) v += jitter(rng);
    }
    OptimizerResult res;
    try {
      res = minimize_projected_lbfgs(f, project, std::move(x0), options);
    } catch (const std::domain_error& e) {
      throw TrainingError(std::string("empirical risk is not finite at the start of restart ") +
                          std::to_string(r + 1) + " (D1=" + std::to_string(config.drift_dim) +
                          ", D2=" + std::to_string(config.diffusion_dim) + "): " + e.what());
    }
    if (!std::isfinite(res.value))
      throw TrainingError("empirical risk became non-finite during restart " + std::to_string(r + 1));
    if (!best || res.value < best->value) best = std::move(res);
  }

  FittedScore fitted{objective.unpack(best->x), best->value, best->initial_value, best->iterations,
                     best->converged, std::move(best->trace)};
  return fitted;
}

std::string training_report_json(const FittedScore& fitted, int indent) {
  nlohmann::json doc{{"format", "sdeclass.training_report"},
                     {"version", 1},
                     {"num_classes", fitted.params.num_classes()},
                     {"drift_dim", fitted.params.drift_basis.dimension()},
                     {"diffusion_dim", fitted.params.diffusion_basis.dimension()},
                     {"order", fitted.params.drift_basis.order()},
                     {"initial_risk", fitted.initial_risk},
                     {"train_risk", fitted.train_risk},
                     {"iterations", fitted.iterations},
                     {"converged", fitted.converged},
                     {"risk_trace", fitted.risk_trace},
                     {"params", score_params_json(fitted.params)}};
  return doc.dump(indent);
}

}  // namespace sdeclass
