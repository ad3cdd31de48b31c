// sdeclass: simulate diffusion-path datasets, train and apply ERM scores,
// and run the benchmark protocol.
//
// Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdeclass/sdeclass.hpp"

using namespace sdeclass;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

std::string counts_line(const LabeledDataset& data) {
  std::ostringstream s;
  const auto counts = class_counts(data);
  for (std::size_t k = 0; k < counts.size(); ++k) s << (k ? " " : "") << "class" << k + 1 << "=" << counts[k];
  return s.str();
}

std::vector<Classifier> parse_classifiers(const std::vector<std::string>& names) {
  std::vector<Classifier> out;
  for (const auto& n : names) {
    const auto c = parse_classifier(n);
    if (!c) throw UsageError("unknown classifier '" + n + "' (expected erm, plugin, knn or bayes)");
    out.push_back(*c);
  }
  return out;
}

ModelSpec resolve_model(const std::string& id, const std::vector<int>& classes) {
  ModelSpec m = model_by_name(id);
  if (!classes.empty()) m = restrict_classes(m, classes);
  return m;
}

void print_summary(const BenchResult& r) {
  std::printf("%-8s %10s %10s %6s %8s\n", "classifier", "mean", "std", "reps", "failures");
  for (const auto& s : r.summaries)
    std::printf("%-10s %10.4f %10.4f %6zu %8d\n", std::string(classifier_name(s.classifier)).c_str(), s.mean, s.std,
                s.reps.size(), s.failures);
  std::printf("wall %.1fs\n", r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of discretely observed diffusion paths"};
  app.set_config("--config", "", "Key/value config file (TOML/INI); flags override it");
  app.require_subcommand(1);

  // simulate
  std::string model_id = "model1";
  std::vector<int> classes;
  int num_paths = 1000;
  int steps = 100;
  std::uint64_t seed = 1;
  std::string out_path;
  int threads = 1;
  int refine = 1;

  auto* sim = app.add_subcommand("simulate", "Simulate a labeled dataset (.bin or .csv by extension)");
  sim->add_option("--model", model_id, "model1, model2, model3 or separated")->capture_default_str();
  sim->add_option("--classes", classes, "Keep only these classes (1-based)")->delimiter(',');
  sim->add_option("--N", num_paths, "Number of paths")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--n", steps, "Steps per path")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Master seed")->capture_default_str();
  sim->add_option("--out", out_path, "Output dataset file")->required();
  sim->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sim->add_option("--refine", refine, "Internal Euler substeps per observation")->capture_default_str();

  // train
  std::string data_path;
  std::vector<int> grid{2, 4, 8};
  double kappa = 1.0;
  bool exclude_order = false;
  int drift_dim = 0;
  int diffusion_dim = 0;
  TrainConfig train_cfg;
  std::string report_path;

  auto* train = app.add_subcommand("train", "Fit an ERM score on a dataset and save it as JSON");
  train->add_option("--data", data_path, "Training dataset")->required();
  train->add_option("--out", out_path, "Output score file (JSON)")->required();
  train->add_option("--grid", grid, "Dimension grid for (D1, D2) selection")->delimiter(',')->capture_default_str();
  train->add_option("--kappa", kappa, "Penalty constant")->capture_default_str();
  train->add_flag("--exclude-order", exclude_order, "Penalize D1+D2 instead of D1+D2+M");
  train->add_option("--drift-dim", drift_dim, "Fix D1 (with --diffusion-dim, skips selection)");
  train->add_option("--diffusion-dim", diffusion_dim, "Fix D2");
  train->add_option("--order", train_cfg.order, "Spline degree M")->capture_default_str();
  train->add_option("--max-iters", train_cfg.max_iters, "Optimizer iteration cap")->capture_default_str();
  train->add_option("--restarts", train_cfg.n_restarts, "Optimizer restarts")->capture_default_str();
  train->add_option("--seed", seed, "Restart seed")->capture_default_str();
  train->add_option("--threads", threads, "Threads for the selection grid")->capture_default_str();
  train->add_option("--report", report_path, "Write a JSON selection/training report here");

  // predict
  std::string model_file;
  auto* predict = app.add_subcommand("predict", "Apply a saved score to a dataset");
  predict->add_option("--model-file", model_file, "Score file written by train")->required();
  predict->add_option("--data", data_path, "Dataset to classify")->required();
  predict->add_option("--out", out_path, "Write per-path posteriors as CSV here instead of stdout");

  // bench
  ExperimentSpec spec;
  std::vector<std::string> classifier_names{"erm", "plugin", "knn", "bayes"};
  std::string out_prefix = "bench";
  auto* bench = app.add_subcommand("bench", "Repeated train/test study; writes <out>.csv and <out>.json");
  bench->add_option("--model", spec.model, "model1, model2, model3 or separated")->capture_default_str();
  bench->add_option("--N", spec.train_size, "Training size")->capture_default_str();
  bench->add_option("--n", spec.steps, "Steps per path")->capture_default_str();
  bench->add_option("--reps", spec.reps, "Repetitions")->capture_default_str();
  bench->add_option("--test-size", spec.test_size, "Test size")->capture_default_str();
  bench->add_option("--classifiers", classifier_names, "Subset of erm,plugin,knn,bayes")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--grid", spec.selection.grid, "Dimension grid")->delimiter(',')->capture_default_str();
  bench->add_option("--kappa", spec.selection.kappa, "Penalty constant")->capture_default_str();
  bench->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
  bench->add_option("--threads", spec.threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench->add_option("--refine", spec.refine, "Internal Euler substeps")->capture_default_str();
  bench->add_option("--max-iters", spec.train.max_iters, "Optimizer iteration cap")->capture_default_str();
  bench->add_option("--restarts", spec.train.n_restarts, "Optimizer restarts")->capture_default_str();
  bench->add_option("--out", out_prefix, "Output prefix")->capture_default_str();

  // bayes-risk
  int reps = 20;
  auto* bayes = app.add_subcommand("bayes-risk", "Oracle Bayes-classifier error");
  bayes->add_option("--model", model_id, "model1, model2, model3 or separated")->capture_default_str();
  bayes->add_option("--N", num_paths, "Paths per repetition")->capture_default_str();
  bayes->add_option("--n", steps, "Steps per path")->capture_default_str();
  bayes->add_option("--reps", reps, "Repetitions")->capture_default_str();
  bayes->add_option("--seed", seed, "Master seed")->capture_default_str();
  bayes->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  bayes->add_option("--out", out_prefix, "Write <out>.csv and <out>.json");

  // margin
  std::vector<double> epsilons = default_margin_epsilons();
  auto* margin = app.add_subcommand("margin", "Margin probabilities of a two-class model");
  margin->add_option("--model", model_id, "Model id (use --classes to pick two classes)")->capture_default_str();
  margin->add_option("--classes", classes, "Two classes of the model, e.g. 1,2")->delimiter(',');
  margin->add_option("--N", num_paths, "Monte Carlo paths")->capture_default_str();
  margin->add_option("--n", steps, "Steps per path")->capture_default_str();
  margin->add_option("--eps", epsilons, "Increasing epsilons in (0, 1/8)")->delimiter(',');
  margin->add_option("--seed", seed, "Seed")->capture_default_str();
  margin->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      const auto model = resolve_model(model_id, classes);
      const auto data = simulate_dataset(model, num_paths, steps, seed, {refine, threads});
      save_dataset(out_path, data);
      std::printf("wrote %zu paths (n=%d) to %s: %s\n", data.size(), data.steps, out_path.c_str(),
                  counts_line(data).c_str());
    } else if (*train) {
      const auto data = load_dataset(data_path);
      train_cfg.seed = seed;
      if ((drift_dim > 0) != (diffusion_dim > 0)) throw UsageError("--drift-dim and --diffusion-dim go together");
      std::string report;
      ScoreParams params = [&] {
        if (drift_dim > 0) {
          train_cfg.drift_dim = drift_dim;
          train_cfg.diffusion_dim = diffusion_dim;
          auto fit = train_erm(data, train_cfg);
          std::printf("D1=%d D2=%d train risk %.6f (%d iterations%s)\n", drift_dim, diffusion_dim, fit.train_risk,
                      fit.iterations, fit.converged ? "" : ", not converged");
          report = training_report_json(fit);
          return fit.params;
        }
        SelectionConfig sel;
        sel.grid = grid;
        sel.kappa = kappa;
        sel.include_order_in_penalty = !exclude_order;
        auto result = select_dimensions(data, sel, train_cfg, threads);
        for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        for (const auto& row : result.table)
          if (row.ok)
            std::printf("D1=%d D2=%d risk %.6f penalty %.6f criterion %.6f\n", row.drift_dim, row.diffusion_dim,
                        row.risk, row.penalty, row.criterion);
        std::printf("selected D1=%d D2=%d\n", result.drift_dim, result.diffusion_dim);
        report = selection_report_json(result);
        return result.fitted.params;
      }();
      save_score_params(out_path, params);
      if (!report_path.empty()) write_file(report_path, report);
    } else if (*predict) {
      const auto params = load_score_params(model_file);
      const auto data = load_dataset(data_path);
      if (data.num_classes > params.num_classes())
        throw std::runtime_error("dataset has more classes than the score");
      std::ostringstream rows;
      rows.precision(10);
      rows << "path,label,predicted";
      for (int k = 1; k <= params.num_classes(); ++k) rows << ",pi" << k;
      rows << '\n';
      std::vector<int> predicted;
      for (std::size_t j = 0; j < data.size(); ++j) {
        const auto post = posterior(params, data.paths[j]);
        predicted.push_back(argmax_class(post));
        rows << j << ',' << data.labels[j] << ',' << predicted.back();
        for (double v : post) rows << ',' << v;
        rows << '\n';
      }
      if (out_path.empty())
        std::cout << rows.str();
      else
        write_file(out_path, rows.str());
      std::printf("accuracy %.4f on %zu paths\n", 1.0 - error_rate(predicted, data.labels), data.size());
    } else if (*bench) {
      spec.classifiers = parse_classifiers(classifier_names);
      const auto result = run_bench(spec);
      write_file(out_prefix + ".csv", bench_csv(result));
      write_file(out_prefix + ".json", bench_json(result));
      print_summary(result);
    } else if (*bayes) {
      const auto result = run_bayes_risk(model_id, num_paths, steps, reps, seed, threads);
      if (bayes->count("--out")) {
        write_file(out_prefix + ".csv", bench_csv(result));
        write_file(out_prefix + ".json", bench_json(result));
      }
      print_summary(result);
    } else if (*margin) {
      MarginOptions opt;
      opt.steps = steps;
      opt.seed = seed;
      opt.threads = threads;
      const auto report = margin_diagnostic(resolve_model(model_id, classes), num_paths, epsilons, opt);
      std::printf("epsilon,probability\n");
      for (std::size_t i = 0; i < report.epsilons.size(); ++i)
        std::printf("%.4f,%.6f\n", report.epsilons[i], report.probabilities[i]);
      std::printf("slope %.6f relative residual %.4f over %d paths\n", report.slope, report.relative_residual,
                  report.n_paths);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
