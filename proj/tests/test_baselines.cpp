#include <gtest/gtest.h>

#include <cmath>

#include "sdeclass/baselines.hpp"
#include "sdeclass/errors.hpp"
#include "test_support.hpp"

using namespace sdeclass;
using sdeclass::test_util::constant_model;

TEST(PathDistance, DiscreteL2) {
  const auto a = make_path({0.0, 1.0, 2.0, 2.0});
  const auto b = make_path({0.0, 0.0, 0.0, 0.0});
  EXPECT_NEAR(path_distance(a, b), std::sqrt(9.0 / 3.0), 1e-15);
  EXPECT_EQ(path_distance(a, a), 0.0);
  EXPECT_THROW(path_distance(a, make_path({0.0, 1.0})), ParameterError);
}

TEST(Knn, SingleTrainingPoint) {
  const auto train = simulate_dataset(model_by_name("model1"), 1, 20, 1);
  KnnOptions opt;
  opt.fixed_k = 1;
  const auto model = knn_fit(train, opt);
  const auto queries = simulate_dataset(model_by_name("model1"), 30, 20, 2);
  for (const auto& p : queries.paths) EXPECT_EQ(knn_classify(model, p), train.labels[0]);
}

TEST(Knn, OneNeighbourHasZeroTrainingError) {
  const auto train = simulate_dataset(model_by_name("model2"), 300, 50, 3);
  KnnOptions opt;
  opt.fixed_k = 1;
  const auto model = knn_fit(train, opt);
  std::vector<int> pred;
  for (const auto& p : train.paths) pred.push_back(knn_classify(model, p));
  EXPECT_EQ(error_rate(pred, train.labels), 0.0);
}

TEST(Knn, CrossValidationPicksCandidate) {
  const auto train = simulate_dataset(model_by_name("model1"), 200, 50, 4);
  const auto model = knn_fit(train);
  EXPECT_EQ(model.cv_errors.size(), 5u);
  double best = 1.0;
  for (const auto& [k, err] : model.cv_errors) {
    EXPECT_GE(err, 0.0);
    EXPECT_LE(err, 1.0);
    best = std::min(best, err);
  }
  for (const auto& [k, err] : model.cv_errors)
    if (k == model.k) {
      EXPECT_EQ(err, best);
    }
  EXPECT_THROW(knn_classify(model, make_path({0.0, 1.0})), ParameterError);
}

TEST(Plugin, ZeroDriftUnitDiffusion) {
  const auto m = constant_model({0.0, 0.0}, 1.0, {0.5, 0.5});
  const auto data = simulate_dataset(m, 2000, 100, 5);
  const auto fit = plugin_fit(data, 4, 4);
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    for (const auto& d : fit.params.drift) EXPECT_LE(std::abs(eval_drift(fit.params.drift_basis, d, x)), 0.2) << x;
    EXPECT_NEAR(eval_diffusion(fit.params.diffusion_basis, fit.params.diffusion, x), 1.0, 0.15) << x;
  }
  EXPECT_NEAR(fit.params.diffusion.floor, 1.0 / std::log(2000.0), 1e-15);
}

TEST(Plugin, ConstantDriftRecovered) {
  const auto m = constant_model({1.5, -0.5}, 1.0, {0.5, 0.5});
  const auto data = simulate_dataset(m, 2000, 100, 6);
  const auto fit = plugin_fit(data, 4, 4);
  for (double x = -0.5; x <= 0.5; x += 0.05) {
    EXPECT_NEAR(eval_drift(fit.params.drift_basis, fit.params.drift[0], x), 1.5, 0.2);
    EXPECT_NEAR(eval_drift(fit.params.drift_basis, fit.params.drift[1], x), -0.5, 0.2);
  }
}

TEST(Plugin, MissingClass) {
  const auto m = constant_model({0.0, 1.0}, 1.0, {1.0, 0.0});
  const auto data = simulate_dataset(m, 50, 20, 7);
  EXPECT_THROW(plugin_fit(data, 4, 4), FitError);
}

TEST(Plugin, AdaptiveSelectionOnGrid) {
  const auto data = simulate_dataset(model_by_name("model2"), 300, 50, 8);
  PluginSelection sel;
  const auto fit = plugin_fit_adaptive(data, SelectionConfig{}, 3, &sel);
  EXPECT_EQ(sel.drift_criteria.size(), 3u);
  EXPECT_EQ(sel.diffusion_criteria.size(), 3u);
  EXPECT_EQ(fit.params.drift_basis.dimension(), sel.drift_dim);
  EXPECT_EQ(fit.params.diffusion_basis.dimension(), sel.diffusion_dim);
  for (const auto& [d, c] : sel.drift_criteria)
    if (d == sel.drift_dim) {
      for (const auto& [d2, c2] : sel.drift_criteria) EXPECT_LE(c, c2);
    }
}

TEST(Margin, DegenerateModelHasNoMass) {
  const auto m = constant_model({0.3, 0.3}, 1.0, {0.5, 0.5});
  const auto r = margin_diagnostic(m, 2000, default_margin_epsilons());
  for (double p : r.probabilities) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(r.relative_residual, 0.0);
}

TEST(Margin, SeparatedModelConcentrates) {
  MarginOptions opt;
  opt.seed = 4;
  const auto r = margin_diagnostic(separated_model(5.0), 20000, {0.05}, opt);
  EXPECT_LE(r.probabilities[0], 0.05);
}

TEST(Margin, Model1PairIsMonotoneAndLinear) {
  MarginOptions opt;
  opt.seed = 11;
  const auto m = restrict_classes(model_by_name("model1"), {1, 2});
  const auto r = margin_diagnostic(m, 100000, default_margin_epsilons(), opt);
  for (std::size_t i = 1; i < r.probabilities.size(); ++i) EXPECT_GE(r.probabilities[i], r.probabilities[i - 1]);
  EXPECT_GT(r.probabilities.back(), r.probabilities.front());
  EXPECT_TRUE(std::isfinite(r.slope));
  EXPECT_LE(r.relative_residual, 0.2);
}

TEST(Margin, Errors) {
  EXPECT_THROW(margin_diagnostic(model_by_name("model1"), 100, default_margin_epsilons()), ParameterError);
  EXPECT_THROW(margin_diagnostic(separated_model(), 100, {0.05, 0.02}), ParameterError);
  EXPECT_THROW(margin_diagnostic(separated_model(), 100, {0.2}), ParameterError);
}

TEST(ErrorRate, Basics) {
  EXPECT_EQ(error_rate(std::vector<int>{1, 2, 3, 1}, std::vector<int>{1, 2, 1, 2}), 0.5);
  EXPECT_THROW(error_rate(std::vector<int>{1}, std::vector<int>{1, 2}), ParameterError);
}
