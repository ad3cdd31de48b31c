#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdeclass/erm_train.hpp"

namespace sdeclass {

struct SelectionConfig {
  std::vector<int> grid{2, 4, 8};
  double kappa = 1.0;
  /// Penalize (D1 + D2 + M) instead of (D1 + D2).
  bool include_order_in_penalty = true;

  void validate() const;
};

/// kappa (D1 + D2 [+ M]) log(N) / N.
double penalty(int drift_dim, int diffusion_dim, std::size_t sample_size, int order,
               const SelectionConfig& config);

struct SelectionRow {
  int drift_dim = 0;
  int diffusion_dim = 0;
  double risk = 0.0;
  double penalty = 0.0;
  double criterion = 0.0;
  bool ok = false;
  std::string error;
};

struct SelectionResult {
  int drift_dim = 0;
  int diffusion_dim = 0;
  /// One row per grid pair, in grid order (D1 outer, D2 inner).
  std::vector<SelectionRow> table;
  FittedScore fitted;
  std::vector<std::string> warnings;
};

/// Fits one ERM score per (D1, D2) in grid x grid and returns the pair
/// minimizing training risk + penalty. Ties go to the smaller D1 + D2, then
/// the smaller D1. A cell whose training throws is recorded as failed and
/// skipped; TrainingError is thrown only when every cell fails.
SelectionResult select_dimensions(const LabeledDataset& data, const SelectionConfig& config,
                                  const TrainConfig& train, int threads = 1,
                                  std::optional<std::span<const int>> weight_labels = std::nullopt);

std::string selection_report_json(const SelectionResult& result, int indent = 2);

}  // namespace sdeclass
