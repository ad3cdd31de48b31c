#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdeclass/diffusion_sim.hpp"
#include "sdeclass/scores.hpp"

namespace sdeclass {

struct TrainConfig {
  int drift_dim = 4;      // D1
  int diffusion_dim = 4;  // D2
  int order = 3;          // M
  int max_iters = 500;
  double grad_tol = 1e-5;
  int n_restarts = 1;
  /// Standard deviation of the Gaussian jitter added to the neutral start for
  /// restarts 2..n_restarts (restart 1 always starts from the neutral point).
  double init_scale = 0.1;
  /// Estimate class weights from `weight_labels` instead of the training labels.
  bool split_weights = false;
  /// Enforce the coefficient balls after every step. Off only for diagnostics.
  bool project = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FittedScore {
  ScoreParams params;
  double train_risk = 0.0;
  double initial_risk = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Accepted-step risks of the returned restart.
  std::vector<double> risk_trace;
};

/// Empirical class frequencies. Throws ParameterError on empty input or a
/// label outside 1..K.
std::vector<double> estimate_weights(std::span<const int> labels, int num_classes);

/// (1/N) sum_j sum_k (Z_k^j - h_k^j)^2 for score rows h^j (row-major, N x K)
/// and Z_k^j = 2 1{Y_j = k} - 1.
double l2_risk(std::span<const double> scores, std::span<const int> labels, int num_classes);

/// Empirical L2 risk of the score defined by `params` on `data`.
double empirical_risk(const ScoreParams& params, const LabeledDataset& data);

/// Gradient of empirical_risk with respect to every coefficient. The weights
/// are not parameters and receive no gradient.
struct RiskGradient {
  std::vector<std::vector<double>> drift;
  std::vector<double> diffusion;
};

RiskGradient risk_gradient(const ScoreParams& params, const LabeledDataset& data);

/// Minimizes the empirical L2 risk over S_{D1}^K x S~_{D2} with fixed
/// weights p^. The support is [-log N, log N], the floor 1/log N and the
/// coefficient balls (D + M) log^3 N, where N is the training-set size.
///
/// Throws ParameterError for an empty dataset or a missing weight sample when
/// split_weights is set, TrainingError if the risk becomes non-finite.
FittedScore train_erm(const LabeledDataset& data, const TrainConfig& config,
                      std::optional<std::span<const int>> weight_labels = std::nullopt);

/// JSON training report: dimensions, risks, iterations, convergence flag and
/// the risk trace, plus the fitted score under "params".
std::string training_report_json(const FittedScore& fitted, int indent = 2);

}  // namespace sdeclass
