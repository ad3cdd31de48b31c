#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdeclass/diffusion_sim.hpp"
#include "sdeclass/model_select.hpp"
#include "sdeclass/scores.hpp"

namespace sdeclass {

// ---------------------------------------------------------------------------
// k nearest neighbours on discretized paths

/// Discrete L2([0,1]) distance: sqrt(delta * sum_i (x_i - y_i)^2).
double path_distance(const Path& a, const Path& b);

struct KnnOptions {
  std::vector<int> candidate_k{1, 5, 11, 21, 41};
  int folds = 5;
  /// Skip cross-validation and use this k.
  std::optional<int> fixed_k;
  int threads = 1;
};

struct KnnModel {
  LabeledDataset train;
  int k = 1;
  /// Cross-validated error per candidate k actually tried (empty when fixed).
  std::vector<std::pair<int, double>> cv_errors;
};

/// Stores the training set and picks k by `folds`-fold cross-validation
/// (fold of path j is j mod folds) over the candidates capped at the training
/// fold size; the smallest k wins ties.
KnnModel knn_fit(const LabeledDataset& train, const KnnOptions& options = {});

/// Majority vote among the k nearest training paths (distance ties broken by
/// training index, vote ties by the smallest class). Throws ParameterError if
/// the path grid differs from the training grid.
int knn_classify(const KnnModel& model, const Path& path);

// ---------------------------------------------------------------------------
// Plug-in classifier

struct PluginModel {
  ScoreParams params;
};

/// Least-squares spline estimates: the drift of class k regresses
/// (X_{i+1} - X_i) / delta on the drift basis at X_i over the class-k paths;
/// sigma^2 regresses (X_{i+1} - X_i)^2 / delta on the diffusion basis over
/// all paths. A ridge of `ridge` is added to each Gram matrix. The support is
/// [-log N, log N] and the diffusion is floored at 1/log N. Throws FitError
/// if a class has no paths.
PluginModel plugin_fit(const LabeledDataset& data, int drift_dim, int diffusion_dim, int order = 3,
                       double ridge = 1e-8);

struct PluginSelection {
  int drift_dim = 0;
  int diffusion_dim = 0;
  /// Penalized least-squares contrast per grid value.
  std::vector<std::pair<int, double>> drift_criteria;
  std::vector<std::pair<int, double>> diffusion_criteria;
};

/// Chooses D1 and D2 independently over config.grid, each minimizing the mean
/// squared regression residual plus kappa (D [+ M]) log N / N, then fits.
PluginModel plugin_fit_adaptive(const LabeledDataset& data, const SelectionConfig& config, int order = 3,
                                PluginSelection* selection = nullptr);

int plugin_classify(const PluginModel& model, const Path& path);

// ---------------------------------------------------------------------------
// Margin diagnostic

struct MarginOptions {
  int steps = 100;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct MarginReport {
  std::vector<double> epsilons;
  /// Estimated P(0 < |pi_1(X) - 1/2| <= eps) for each epsilon.
  std::vector<double> probabilities;
  /// Least-squares slope of probabilities on epsilons through the origin.
  double slope = 0.0;
  /// ||p - slope * eps||_2 / ||p||_2 (0 when every probability is 0).
  double relative_residual = 0.0;
  int n_paths = 0;
};

/// 0.01, 0.02, ..., 0.12.
std::vector<double> default_margin_epsilons();

/// Monte Carlo estimate of the margin probabilities of a two-class model using
/// the oracle posterior. Every epsilon is evaluated on the same sample, so the
/// probabilities are nondecreasing. Throws ParameterError unless K = 2 and the
/// epsilons are increasing and inside (0, 1/8).
MarginReport margin_diagnostic(const ModelSpec& model, int n_paths, std::vector<double> epsilons,
                               const MarginOptions& options = {});

// ---------------------------------------------------------------------------

/// Fraction of positions where predicted and truth differ.
double error_rate(std::span<const int> predicted, std::span<const int> truth);

}  // namespace sdeclass
