#include "sdeclass/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "sdeclass/baselines.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/parallel.hpp"
#include "sdeclass/rng.hpp"
#include "sdeclass/scores.hpp"

namespace sdeclass {

std::string_view classifier_name(Classifier c) noexcept {
  switch (c) {
    case Classifier::Erm: return "erm";
    case Classifier::Plugin: return "plugin";
    case Classifier::Knn: return "knn";
    case Classifier::Bayes: return "bayes";
  }
  return "unknown";
}

std::optional<Classifier> parse_classifier(std::string_view name) {
  for (auto c : {Classifier::Erm, Classifier::Plugin, Classifier::Knn, Classifier::Bayes})
    if (classifier_name(c) == name) return c;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  model_by_name(model);
  if (train_size < 2) throw ParameterError("training size must be >= 2");
  if (steps < 1) throw ParameterError("steps must be >= 1");
  if (reps < 1) throw ParameterError("reps must be >= 1");
  if (test_size < 1) throw ParameterError("test size must be >= 1");
  if (classifiers.empty()) throw ParameterError("no classifiers requested");
  if (refine < 1) throw ParameterError("refinement factor must be >= 1");
  selection.validate();
  train.validate();
}

const ClassifierSummary* BenchResult::find(Classifier c) const noexcept {
  for (const auto& s : summaries)
    if (s.classifier == c) return &s;
  return nullptr;
}

namespace {

void summarize(ClassifierSummary& s) {
  std::sort(s.reps.begin(), s.reps.end(), [](const RepOutcome& a, const RepOutcome& b) { return a.rep < b.rep; });
  std::vector<double> errs;
  s.failures = 0;
  for (const auto& r : s.reps) {
    if (r.ok)
      errs.push_back(r.error);
    else
      ++s.failures;
  }
  s.mean = 0.0;
  s.std = 0.0;
  if (errs.empty()) return;
  for (double e : errs) s.mean += e;
  s.mean /= static_cast<double>(errs.size());
  if (errs.size() > 1) {
    double ss = 0.0;
    for (double e : errs) ss += (e - s.mean) * (e - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(errs.size() - 1));
  }
}

std::vector<double> oracle_scores(const OracleScore& oracle, const LabeledDataset& data) {
  std::vector<double> h;
  h.reserve(data.size() * static_cast<std::size_t>(data.num_classes));
  for (const auto& p : data.paths) {
    const auto s = score_from_posterior(oracle_posterior(oracle, p));
    h.insert(h.end(), s.begin(), s.end());
  }
  return h;
}

RepOutcome run_one(Classifier c, int rep, const ExperimentSpec& spec, const LabeledDataset& train,
                   const LabeledDataset& test, const OracleScore& oracle, double oracle_l2) {
  RepOutcome out;
  out.rep = rep;
  std::vector<int> predicted(test.size());
  try {
    switch (c) {
      case Classifier::Erm: {
        TrainConfig cfg = spec.train;
        cfg.seed = derive_seed(spec.seed, 3 * static_cast<std::uint64_t>(rep) + 2);
        const auto sel = select_dimensions(train, spec.selection, cfg);
        out.drift_dim = sel.drift_dim;
        out.diffusion_dim = sel.diffusion_dim;
        std::vector<double> h;
        h.reserve(test.size() * static_cast<std::size_t>(test.num_classes));
        for (std::size_t j = 0; j < test.size(); ++j) {
          const auto s = score(sel.fitted.params, test.paths[j]);
          predicted[j] = argmax_class(s);
          h.insert(h.end(), s.begin(), s.end());
        }
        out.l2_excess = l2_risk(h, test.labels, test.num_classes) - oracle_l2;
        out.zhang_bound = zhang_gap(std::max(out.l2_excess, 0.0));
        break;
      }
      case Classifier::Plugin: {
        const auto model = plugin_fit_adaptive(train, spec.selection, spec.train.order);
        for (std::size_t j = 0; j < test.size(); ++j) predicted[j] = plugin_classify(model, test.paths[j]);
        break;
      }
      case Classifier::Knn: {
        const auto model = knn_fit(train);
        for (std::size_t j = 0; j < test.size(); ++j) predicted[j] = knn_classify(model, test.paths[j]);
        break;
      }
      case Classifier::Bayes:
        for (std::size_t j = 0; j < test.size(); ++j) predicted[j] = oracle_classify(oracle, test.paths[j]);
        break;
    }
    out.error = error_rate(predicted, test.labels);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

}  // namespace

BenchResult run_bench(const ExperimentSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const ModelSpec model = model_by_name(spec.model);
  const OracleScore oracle{model};
  const bool needs_oracle_l2 =
      std::find(spec.classifiers.begin(), spec.classifiers.end(), Classifier::Erm) != spec.classifiers.end();

  // outcomes[r][c]
  std::vector<std::vector<RepOutcome>> outcomes(static_cast<std::size_t>(spec.reps));
  parallel_for(outcomes.size(), spec.threads, [&](std::size_t r) {
    const std::uint64_t base = 3 * static_cast<std::uint64_t>(r);
    const SimulationOptions sim{spec.refine, 1};
    const auto train = simulate_dataset(model, spec.train_size, spec.steps, derive_seed(spec.seed, base), sim);
    const auto test = simulate_dataset(model, spec.test_size, spec.steps, derive_seed(spec.seed, base + 1), sim);
    const double oracle_l2 =
        needs_oracle_l2 ? l2_risk(oracle_scores(oracle, test), test.labels, test.num_classes) : 0.0;
    for (Classifier c : spec.classifiers)
      outcomes[r].push_back(run_one(c, static_cast<int>(r), spec, train, test, oracle, oracle_l2));
  });

  BenchResult result;
  result.spec = spec;
  for (std::size_t c = 0; c < spec.classifiers.size(); ++c) {
    ClassifierSummary s;
    s.classifier = spec.classifiers[c];
    for (auto& rep : outcomes) s.reps.push_back(std::move(rep[c]));
    summarize(s);
    result.summaries.push_back(std::move(s));
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

BenchResult run_bayes_risk(const std::string& model_id, int num_paths, int steps, int reps, std::uint64_t seed,
                           int threads) {
  ExperimentSpec spec;
  spec.model = model_id;
  spec.train_size = num_paths;
  spec.steps = steps;
  spec.reps = reps;
  spec.test_size = num_paths;
  spec.classifiers = {Classifier::Bayes};
  spec.seed = seed;
  spec.threads = threads;
  spec.validate();

  const auto start = std::chrono::steady_clock::now();
  const ModelSpec model = model_by_name(model_id);
  const OracleScore oracle{model};
  ClassifierSummary s;
  s.classifier = Classifier::Bayes;
  s.reps.resize(static_cast<std::size_t>(reps));
  parallel_for(s.reps.size(), threads, [&](std::size_t r) {
    RepOutcome& out = s.reps[r];
    out.rep = static_cast<int>(r);
    try {
      const auto sample = simulate_dataset(model, num_paths, steps, derive_seed(seed, 3 * static_cast<std::uint64_t>(r)));
      std::vector<int> predicted(sample.size());
      for (std::size_t j = 0; j < sample.size(); ++j) predicted[j] = oracle_classify(oracle, sample.paths[j]);
      out.error = error_rate(predicted, sample.labels);
      out.ok = true;
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
  });
  summarize(s);
  BenchResult result;
  result.spec = spec;
  result.summaries.push_back(std::move(s));
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "classifier,model,N,n,rep,error\n";
  const std::size_t reps = static_cast<std::size_t>(result.spec.reps);
  for (std::size_t r = 0; r < reps; ++r)
    for (const auto& s : result.summaries) {
      const auto& rep = s.reps[r];
      if (!rep.ok) continue;
      out << classifier_name(s.classifier) << ',' << result.spec.model << ',' << result.spec.train_size << ','
          << result.spec.steps << ',' << rep.rep << ',' << rep.error << '\n';
    }
  return out.str();
}

std::string bench_json(const BenchResult& result, int indent) {
  using nlohmann::json;
  const auto& spec = result.spec;
  json classifiers = json::array();
  for (const auto& s : spec.classifiers) classifiers.push_back(classifier_name(s));
  json config{{"model", spec.model},
              {"N", spec.train_size},
              {"n", spec.steps},
              {"reps", spec.reps},
              {"test_size", spec.test_size},
              {"classifiers", classifiers},
              {"grid", spec.selection.grid},
              {"kappa", spec.selection.kappa},
              {"include_order_in_penalty", spec.selection.include_order_in_penalty},
              {"order", spec.train.order},
              {"max_iters", spec.train.max_iters},
              {"grad_tol", spec.train.grad_tol},
              {"n_restarts", spec.train.n_restarts},
              {"seed", spec.seed},
              {"threads", spec.threads},
              {"refine", spec.refine}};
  json summaries = json::array();
  for (const auto& s : result.summaries) {
    json errors = json::array();
    json failures = json::array();
    json reps = json::array();
    for (const auto& r : s.reps) {
      if (r.ok) {
        errors.push_back(r.error);
        json rep{{"rep", r.rep}, {"error", r.error}};
        if (s.classifier == Classifier::Erm) {
          rep["drift_dim"] = r.drift_dim;
          rep["diffusion_dim"] = r.diffusion_dim;
          rep["l2_excess"] = r.l2_excess;
          rep["zhang_bound"] = r.zhang_bound;
        }
        reps.push_back(std::move(rep));
      } else {
        failures.push_back(json{{"rep", r.rep}, {"error", r.failure}});
      }
    }
    summaries.push_back(json{{"classifier", classifier_name(s.classifier)},
                             {"mean", s.mean},
                             {"std", s.std},
                             {"errors", std::move(errors)},
                             {"reps", std::move(reps)},
                             {"failures", std::move(failures)}});
  }
  json doc{{"format", "sdeclass.bench_result"},
           {"version", 1},
           {"config", std::move(config)},
           {"results", std::move(summaries)},
           {"wall_seconds", result.wall_seconds}};
  return doc.dump(indent);
}

}  // namespace sdeclass
