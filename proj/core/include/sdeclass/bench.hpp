#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdeclass/erm_train.hpp"
#include "sdeclass/model_select.hpp"

namespace sdeclass {

enum class Classifier { Erm, Plugin, Knn, Bayes };

std::string_view classifier_name(Classifier c) noexcept;
std::optional<Classifier> parse_classifier(std::string_view name);

/// One simulation study: `reps` independent (train, test) pairs from one model.
///
/// Seeding: repetition r draws its training sample from stream 3r of `seed`,
/// its test sample from stream 3r + 1 and its optimizer restarts from stream
/// 3r + 2 (see derive_seed), so repetitions can run in any order.
struct ExperimentSpec {
  std::string model = "model1";
  int train_size = 1000;  // N
  int steps = 100;        // n
  int reps = 30;
  int test_size = 1000;  // M
  std::vector<Classifier> classifiers{Classifier::Erm, Classifier::Plugin, Classifier::Knn,
                                      Classifier::Bayes};
  SelectionConfig selection;
  TrainConfig train;
  std::uint64_t seed = 1;
  int threads = 1;
  int refine = 1;

  void validate() const;
};

struct RepOutcome {
  int rep = 0;
  bool ok = false;
  double error = 0.0;
  std::string failure;
  // ERM only.
  int drift_dim = 0;
  int diffusion_dim = 0;
  /// Test-set L2 risk of the fitted score minus that of the oracle score.
  double l2_excess = 0.0;
  /// zhang_gap(max(l2_excess, 0)).
  double zhang_bound = 0.0;
};

struct ClassifierSummary {
  Classifier classifier = Classifier::Erm;
  /// Sorted by rep.
  std::vector<RepOutcome> reps;
  /// Mean and sample standard deviation over successful reps.
  double mean = 0.0;
  double std = 0.0;
  int failures = 0;
};

struct BenchResult {
  ExperimentSpec spec;
  std::vector<ClassifierSummary> summaries;
  double wall_seconds = 0.0;

  const ClassifierSummary* find(Classifier c) const noexcept;
};

/// Simulate / fit / evaluate for every repetition. A classifier that throws in
/// a repetition is recorded as a failure for that repetition; the run continues.
BenchResult run_bench(const ExperimentSpec& spec);

/// Bayes-classifier error: each repetition simulates `train_size` paths (stream
/// 3r of the seed) and classifies them with the oracle posterior.
BenchResult run_bayes_risk(const std::string& model, int num_paths, int steps, int reps, std::uint64_t seed,
                           int threads = 1);

/// classifier,model,N,n,rep,error  (one row per successful (rep, classifier),
/// rep-major, errors with 17 significant digits).
std::string bench_csv(const BenchResult& result);

std::string bench_json(const BenchResult& result, int indent = 2);

}  // namespace sdeclass
