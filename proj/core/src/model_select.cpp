#include "sdeclass/model_select.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "json.hpp"
#include "json_support.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/parallel.hpp"

namespace sdeclass {

void SelectionConfig::validate() const {
  if (grid.empty()) throw ParameterError("selection grid must be nonempty");
  for (int d : grid)
    if (d < 1) throw ParameterError("selection grid entries must be >= 1");
  if (!(kappa > 0.0)) throw ParameterError("kappa must be > 0");
}

double penalty(int drift_dim, int diffusion_dim, std::size_t sample_size, int order,
               const SelectionConfig& config) {
  if (!(config.kappa > 0.0)) throw ParameterError("kappa must be > 0");
  if (drift_dim < 1 || diffusion_dim < 1 || order < 1 || sample_size < 1)
    throw ParameterError("penalty arguments must be positive");
  const double n = static_cast<double>(sample_size);
  const int dims = drift_dim + diffusion_dim + (config.include_order_in_penalty ? order : 0);
  return config.kappa * dims * std::log(n) / n;
}

namespace {

bool better(const SelectionRow& a, const SelectionRow& b) {
  if (a.criterion != b.criterion) return a.criterion < b.criterion;
  const int sa = a.drift_dim + a.diffusion_dim;
  const int sb = b.drift_dim + b.diffusion_dim;
  if (sa != sb) return sa < sb;
  return a.drift_dim < b.drift_dim;
}

}  // namespace

SelectionResult select_dimensions(const LabeledDataset& data, const SelectionConfig& config,
                                  const TrainConfig& train, int threads,
                                  std::optional<std::span<const int>> weight_labels) {
  config.validate();
  train.validate();

  std::vector<std::pair<int, int>> cells;
  for (int d1 : config.grid)
    for (int d2 : config.grid) cells.emplace_back(d1, d2);

  std::vector<SelectionRow> rows(cells.size());
  std::vector<std::optional<FittedScore>> fits(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    SelectionRow& row = rows[c];
    row.drift_dim = cells[c].first;
    row.diffusion_dim = cells[c].second;
    row.penalty = penalty(row.drift_dim, row.diffusion_dim, data.size(), train.order, config);
    TrainConfig cfg = train;
    cfg.drift_dim = row.drift_dim;
    cfg.diffusion_dim = row.diffusion_dim;
    try {
      fits[c] = train_erm(data, cfg, weight_labels);
      row.risk = fits[c]->train_risk;
      row.criterion = row.risk + row.penalty;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });

  std::vector<std::string> warnings;
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (!rows[c].ok) {
      warnings.push_back("cell (" + std::to_string(rows[c].drift_dim) + "," +
                                std::to_string(rows[c].diffusion_dim) + ") failed: " + rows[c].error);
      continue;
    }
    if (!best || better(rows[c], rows[*best])) best = c;
  }
  if (!best) throw TrainingError("every selection cell failed to train; first error: " + rows.front().error);

  const int d1 = rows[*best].drift_dim;
  const int d2 = rows[*best].diffusion_dim;
  return SelectionResult{d1, d2, std::move(rows), std::move(*fits[*best]), std::move(warnings)};
}

std::string selection_report_json(const SelectionResult& result, int indent) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : result.table) {
    nlohmann::json r{{"drift_dim", row.drift_dim},
                     {"diffusion_dim", row.diffusion_dim},
                     {"penalty", row.penalty},
                     {"ok", row.ok}};
    if (row.ok) {
      r["risk"] = row.risk;
      r["criterion"] = row.criterion;
    } else {
      r["error"] = row.error;
    }
    table.push_back(std::move(r));
  }
  nlohmann::json doc{{"format", "sdeclass.selection_report"},
                     {"version", 1},
                     {"chosen", {{"drift_dim", result.drift_dim}, {"diffusion_dim", result.diffusion_dim}}},
                     {"train_risk", result.fitted.train_risk},
                     {"iterations", result.fitted.iterations},
                     {"converged", result.fitted.converged},
                     {"table", std::move(table)},
                     {"warnings", result.warnings}};
  return doc.dump(indent);
}

}  // namespace sdeclass
