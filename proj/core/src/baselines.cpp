#include "sdeclass/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "sdeclass/errors.hpp"
#include "sdeclass/parallel.hpp"

namespace sdeclass {

double path_distance(const Path& a, const Path& b) {
  if (a.values.size() != b.values.size()) throw ParameterError("paths are on different grids");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return std::sqrt(a.delta * acc);
}

namespace {

double squared_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Indices into `pool` of the `count` nearest paths to `query`, nearest first.
std::vector<std::size_t> nearest(const LabeledDataset& data, std::span<const std::size_t> pool,
                                 const std::vector<double>& query, std::size_t count) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(pool.size());
  for (std::size_t idx : pool) dist.emplace_back(squared_gap(query, data.paths[idx].values), idx);
  count = std::min(count, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(count), dist.end());
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = dist[i].second;
  return out;
}

int vote(const LabeledDataset& data, std::span<const std::size_t> neighbours, int k) {
  std::vector<int> counts(static_cast<std::size_t>(data.num_classes), 0);
  for (int i = 0; i < k; ++i) ++counts[static_cast<std::size_t>(data.labels[neighbours[static_cast<std::size_t>(i)]] - 1)];
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin()) + 1;
}

}  // namespace

KnnModel knn_fit(const LabeledDataset& train, const KnnOptions& options) {
  train.validate();
  if (train.size() == 0) throw ParameterError("k-NN needs a nonempty training set");
  KnnModel model{train, 1, {}};
  const std::size_t n = train.size();

  if (options.fixed_k) {
    if (*options.fixed_k < 1 || static_cast<std::size_t>(*options.fixed_k) > n)
      throw ParameterError("k must lie in 1..N");
    model.k = *options.fixed_k;
    return model;
  }
  if (options.candidate_k.empty()) throw ParameterError("k-NN needs candidate values of k");
  const int folds = options.folds;
  if (folds < 2 || n < static_cast<std::size_t>(folds)) {
    model.k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(
        *std::min_element(options.candidate_k.begin(), options.candidate_k.end())), n));
    return model;
  }

  // Smallest training-fold size bounds every candidate.
  std::vector<std::size_t> fold_size(static_cast<std::size_t>(folds), 0);
  for (std::size_t j = 0; j < n; ++j) ++fold_size[j % static_cast<std::size_t>(folds)];
  const std::size_t cap = n - *std::max_element(fold_size.begin(), fold_size.end());
  std::set<int> ks;
  for (int k : options.candidate_k) {
    if (k < 1) throw ParameterError("candidate k must be >= 1");
    ks.insert(static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), cap)));
  }
  const std::vector<int> candidates(ks.begin(), ks.end());
  const std::size_t kmax = static_cast<std::size_t>(candidates.back());

  std::vector<std::vector<std::size_t>> pools(static_cast<std::size_t>(folds));
  for (std::size_t f = 0; f < pools.size(); ++f)
    for (std::size_t j = 0; j < n; ++j)
      if (j % pools.size() != f) pools[f].push_back(j);

  // mistakes[j * C + c] = 1 if candidate c misclassifies held-out path j.
  std::vector<char> mistakes(n * candidates.size(), 0);
  parallel_for(n, options.threads, [&](std::size_t j) {
    const auto& pool = pools[j % pools.size()];
    const auto nn = nearest(train, pool, train.paths[j].values, kmax);
    for (std::size_t c = 0; c < candidates.size(); ++c)
      mistakes[j * candidates.size() + c] = vote(train, nn, candidates[c]) != train.labels[j];
  });

  double best_err = 2.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::size_t wrong = 0;
    for (std::size_t j = 0; j < n; ++j) wrong += static_cast<std::size_t>(mistakes[j * candidates.size() + c]);
    const double err = static_cast<double>(wrong) / static_cast<double>(n);
    model.cv_errors.emplace_back(candidates[c], err);
    if (err < best_err) {
      best_err = err;
      model.k = candidates[c];
    }
  }
  return model;
}

int knn_classify(const KnnModel& model, const Path& path) {
  if (path.steps != model.train.steps || path.values.size() != model.train.paths.front().values.size())
    throw ParameterError("query path grid (" + std::to_string(path.steps) +
                         " steps) does not match the training grid (" + std::to_string(model.train.steps) +
                         " steps)");
  std::vector<std::size_t> all(model.train.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto nn = nearest(model.train, all, path.values, static_cast<std::size_t>(model.k));
  return vote(model.train, nn, model.k);
}

// ---------------------------------------------------------------------------

namespace {

struct Regression {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
  double response_sq = 0.0;  // sum of squared responses
  std::size_t count = 0;
};

// Accumulates the normal equations of response ~ basis(X_i) over the grid
// points of the selected paths. `response(dx)` maps an increment to the
// regression target.
template <class Response, class Select>
Regression accumulate(const LabeledDataset& data, const SplineBasis& basis, Response&& response,
                      Select&& select) {
  const Eigen::Index size = static_cast<Eigen::Index>(basis.size());
  Regression reg{Eigen::MatrixXd::Zero(size, size), Eigen::VectorXd::Zero(size), 0.0, 0};
  double local[SplineBasis::kMaxOrder + 1];
  const int width = basis.order() + 1;
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (!select(j)) continue;
    const auto& x = data.paths[j].values;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double z = response(x[i + 1] - x[i]);
      reg.response_sq += z * z;
      ++reg.count;
      const int first = basis.eval_local(x[i], local);
      if (first < 0) continue;
      for (int p = 0; p < width; ++p) {
        reg.rhs[first + p] += local[p] * z;
        for (int q = 0; q < width; ++q) reg.gram(first + p, first + q) += local[p] * local[q];
      }
    }
  }
  return reg;
}

struct Solved {
  std::vector<double> coeffs;
  double sse = 0.0;  // residual sum of squares
};

Solved solve(const Regression& reg, double ridge) {
  const Eigen::Index size = reg.gram.rows();
  Eigen::MatrixXd a = reg.gram;
  a.diagonal().array() += ridge;
  const Eigen::VectorXd c = a.ldlt().solve(reg.rhs);
  // ||z - B c||^2 = z'z - 2 c'B'z + c'B'B c
  const double sse = reg.response_sq - 2.0 * c.dot(reg.rhs) + c.dot(reg.gram * c);
  return Solved{std::vector<double>(c.data(), c.data() + size), std::max(sse, 0.0)};
}

struct PluginPieces {
  std::vector<DriftCoeffs> drift;
  double drift_sse = 0.0;
  std::size_t drift_count = 0;
  DiffusionCoeffs diffusion;
  double diffusion_sse = 0.0;
  std::size_t diffusion_count = 0;
};

void require_all_classes(const LabeledDataset& data) {
  const auto counts = class_counts(data);
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] == 0) throw FitError("plug-in fit: class " + std::to_string(k + 1) + " has no paths");
}

std::vector<DriftCoeffs> fit_drifts(const LabeledDataset& data, const SplineBasis& basis, double ridge,
                                    double* sse, std::size_t* count) {
  const double delta = data.delta;
  std::vector<DriftCoeffs> out;
  for (int k = 1; k <= data.num_classes; ++k) {
    const auto reg = accumulate(
        data, basis, [delta](double dx) { return dx / delta; },
        [&](std::size_t j) { return data.labels[j] == k; });
    auto s = solve(reg, ridge);
    if (sse) *sse += s.sse;
    if (count) *count += reg.count;
    out.push_back(DriftCoeffs{std::move(s.coeffs)});
  }
  return out;
}

DiffusionCoeffs fit_diffusion(const LabeledDataset& data, const SplineBasis& basis, double ridge,
                              double floor, double* sse, std::size_t* count) {
  const double delta = data.delta;
  const auto reg = accumulate(
      data, basis, [delta](double dx) { return dx * dx / delta; }, [](std::size_t) { return true; });
  auto s = solve(reg, ridge);
  if (sse) *sse = s.sse;
  if (count) *count = reg.count;
  return DiffusionCoeffs{std::move(s.coeffs), floor};
}

}  // namespace

PluginModel plugin_fit(const LabeledDataset& data, int drift_dim, int diffusion_dim, int order, double ridge) {
  data.validate();
  if (data.size() < 2) throw FitError("plug-in fit needs at least two paths");
  require_all_classes(data);
  const double logn = std::log(static_cast<double>(data.size()));
  SplineBasis drift_basis(order, drift_dim, logn);
  SplineBasis diffusion_basis(order, diffusion_dim, logn);
  auto drifts = fit_drifts(data, drift_basis, ridge, nullptr, nullptr);
  auto diffusion = fit_diffusion(data, diffusion_basis, ridge, 1.0 / logn, nullptr, nullptr);
  std::vector<double> weights(static_cast<std::size_t>(data.num_classes));
  const auto counts = class_counts(data);
  for (std::size_t k = 0; k < weights.size(); ++k)
    weights[k] = static_cast<double>(counts[k]) / static_cast<double>(data.size());
  ScoreParams params{std::move(drift_basis), std::move(diffusion_basis), std::move(drifts), std::move(diffusion),
                     std::move(weights)};
  params.validate();
  return PluginModel{std::move(params)};
}

PluginModel plugin_fit_adaptive(const LabeledDataset& data, const SelectionConfig& config, int order,
                                PluginSelection* selection) {
  config.validate();
  data.validate();
  if (data.size() < 2) throw FitError("plug-in fit needs at least two paths");
  require_all_classes(data);
  const double n = static_cast<double>(data.size());
  const double logn = std::log(n);
  auto pen = [&](int d) {
    return config.kappa * (d + (config.include_order_in_penalty ? order : 0)) * logn / n;
  };

  PluginSelection sel;
  double best_drift = 0.0;
  double best_diffusion = 0.0;
  for (int d : config.grid) {
    const SplineBasis basis(order, d, logn);
    double sse = 0.0;
    std::size_t count = 0;
    fit_drifts(data, basis, 1e-8, &sse, &count);
    const double crit_drift = sse / static_cast<double>(count) + pen(d);
    sel.drift_criteria.emplace_back(d, crit_drift);
    if (sel.drift_dim == 0 || crit_drift < best_drift || (crit_drift == best_drift && d < sel.drift_dim)) {
      best_drift = crit_drift;
      sel.drift_dim = d;
    }
    fit_diffusion(data, basis, 1e-8, 1.0 / logn, &sse, &count);
    const double crit_diff = sse / static_cast<double>(count) + pen(d);
    sel.diffusion_criteria.emplace_back(d, crit_diff);
    if (sel.diffusion_dim == 0 || crit_diff < best_diffusion ||
        (crit_diff == best_diffusion && d < sel.diffusion_dim)) {
      best_diffusion = crit_diff;
      sel.diffusion_dim = d;
    }
  }
  auto model = plugin_fit(data, sel.drift_dim, sel.diffusion_dim, order);
  if (selection) *selection = std::move(sel);
  return model;
}

int plugin_classify(const PluginModel& model, const Path& path) { return classify(model.params, path); }

// ---------------------------------------------------------------------------

std::vector<double> default_margin_epsilons() {
  std::vector<double> eps;
  for (int i = 1; i <= 12; ++i) eps.push_back(0.01 * i);
  return eps;
}

MarginReport margin_diagnostic(const ModelSpec& model, int n_paths, std::vector<double> epsilons,
                               const MarginOptions& options) {
  model.validate();
  if (model.num_classes() != 2)
    throw ParameterError("margin diagnostic needs a two-class model, got K = " +
                         std::to_string(model.num_classes()));
  if (n_paths < 1) throw ParameterError("margin diagnostic needs at least one path");
  if (epsilons.empty()) throw ParameterError("margin diagnostic needs at least one epsilon");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] < 0.125)) throw ParameterError("epsilons must lie in (0, 1/8)");
    if (i > 0 && !(epsilons[i] > epsilons[i - 1])) throw ParameterError("epsilons must be increasing");
  }

  const auto sample = simulate_dataset(model, n_paths, options.steps, options.seed,
                                       SimulationOptions{1, options.threads});
  const OracleScore oracle{model};
  std::vector<double> gap(sample.size());
  parallel_for(sample.size(), options.threads, [&](std::size_t j) {
    gap[j] = std::abs(oracle_posterior(oracle, sample.paths[j])[0] - 0.5);
  });

  MarginReport report;
  report.n_paths = n_paths;
  report.epsilons = std::move(epsilons);
  for (double eps : report.epsilons) {
    const auto hits = std::count_if(gap.begin(), gap.end(), [eps](double g) { return g > 0.0 && g <= eps; });
    report.probabilities.push_back(static_cast<double>(hits) / n_paths);
  }
  double ep = 0.0;
  double ee = 0.0;
  double pp = 0.0;
  for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
    ep += report.epsilons[i] * report.probabilities[i];
    ee += report.epsilons[i] * report.epsilons[i];
    pp += report.probabilities[i] * report.probabilities[i];
  }
  report.slope = ep / ee;
  if (pp > 0.0) {
    double rr = 0.0;
    for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
      const double r = report.probabilities[i] - report.slope * report.epsilons[i];
      rr += r * r;
    }
    report.relative_residual = std::sqrt(rr / pp);
  }
  return report;
}

double error_rate(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw ParameterError("prediction and truth differ in length");
  if (truth.empty()) throw ParameterError("error rate of an empty sample");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

}  // namespace sdeclass
