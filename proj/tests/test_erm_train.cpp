#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdeclass/baselines.hpp"
#include "sdeclass/erm_objective.hpp"
#include "sdeclass/erm_train.hpp"
#include "sdeclass/errors.hpp"
#include "test_support.hpp"

using namespace sdeclass;
using namespace sdeclass::test_util;

namespace {

double naive_risk(const ScoreParams& p, const LabeledDataset& data) {
  double total = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto& x = data.paths[j].values;
    std::vector<double> f(p.drift.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k)
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double b = eval_drift(p.drift_basis, p.drift[k], x[i]);
        const double s = eval_diffusion(p.diffusion_basis, p.diffusion, x[i]);
        f[k] += b / s * (x[i + 1] - x[i]) - 0.5 * data.delta * b * b / s;
      }
    double m = -INFINITY;
    for (double v : f) m = std::max(m, v);
    double z = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) z += p.weights[k] * std::exp(f[k] - m);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double h = 2.0 * p.weights[k] * std::exp(f[k] - m) / z - 1.0;
      const double target = data.labels[j] == static_cast<int>(k) + 1 ? 1.0 : -1.0;
      total += (target - h) * (target - h);
    }
  }
  return total / static_cast<double>(data.size());
}

ScoreParams perturb(ScoreParams p, bool diffusion, std::size_t k, std::size_t l, double h) {
  if (diffusion)
    p.diffusion.alpha[l] += h;
  else
    p.drift[k].a[l] += h;
  return p;
}

}  // namespace

TEST(EstimateWeights, Examples) {
  EXPECT_EQ(estimate_weights(std::vector<int>{1, 1, 2, 3}, 3), (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_EQ(estimate_weights(std::vector<int>{2, 2, 2}, 3), (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_THROW(estimate_weights(std::vector<int>{}, 3), ParameterError);
  EXPECT_THROW(estimate_weights(std::vector<int>{4}, 3), ParameterError);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(1, 3);
  std::vector<int> labels(4000);
  for (int& y : labels) y = u(rng);
  for (double w : estimate_weights(labels, 3)) EXPECT_NEAR(w, 1.0 / 3, 0.03);
}

TEST(L2Risk, Examples) {
  const std::vector<double> zeros(4 * 3, 0.0);
  EXPECT_EQ(l2_risk(zeros, std::vector<int>{1, 2, 3, 1}, 3), 3.0);
  EXPECT_EQ(l2_risk(std::vector<double>{0.5, -0.5}, std::vector<int>{1}, 2), 0.5);
}

TEST(L2Risk, MarginFormIdentity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 5;
    const int n = 1 + trial % 17;
    const auto h = random_vector(static_cast<std::size_t>(k * n), rng);
    std::vector<int> y(n);
    std::uniform_int_distribution<int> u(1, k);
    for (int& v : y) v = u(rng);
    double margin_form = 0.0;
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < k; ++c) {
        const double z = y[j] == c + 1 ? 1.0 : -1.0;
        margin_form += (1.0 - z * h[j * k + c]) * (1.0 - z * h[j * k + c]);
      }
    ASSERT_NEAR(l2_risk(h, y, k), margin_form / n, 1e-12);
  }
}

TEST(EmpiricalRisk, MatchesNaiveAndObjective) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto data = simulate_dataset(model_by_name(trial % 2 ? "model1" : "model2"), 40, 50, 100 + trial);
    const auto p = random_params(3, 2 + trial % 4, 2 + trial % 3, data.size(), rng);
    const double fast = empirical_risk(p, data);
    EXPECT_NEAR(fast, naive_risk(p, data), 1e-10);
    ErmObjective obj(data, p.drift_basis, p.diffusion_basis, p.weights, p.diffusion.floor);
    EXPECT_NEAR(obj.value(obj.pack(p)), fast, 1e-10);
  }
}

TEST(RiskGradient, CentralFiniteDifferences) {
  const double step = 1e-5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const int k = 2 + static_cast<int>(seed % 3);
    ModelSpec model = seed % 2 ? builtin_model(BuiltinModel::Model1) : builtin_model(BuiltinModel::Model2);
    if (k == 2) model = restrict_classes(model, {1, 2});
    if (k == 4) model = restrict_classes(builtin_model(BuiltinModel::Model3), {1, 2, 4, 6});
    const auto data = simulate_dataset(model, 30, 40, seed);
    const auto p = random_params(k, 2 + static_cast<int>(seed % 4), 2 + static_cast<int>(seed % 3), data.size(), rng);
    const auto g = risk_gradient(p, data);
    // Relative error of the whole gradient: ||g - fd||_inf / ||g||_inf.
    double max_diff = 0.0;
    double max_grad = 0.0;
    auto check = [&](bool diffusion, std::size_t c, std::size_t l, double analytic) {
      const double up = empirical_risk(perturb(p, diffusion, c, l, step), data);
      const double dn = empirical_risk(perturb(p, diffusion, c, l, -step), data);
      const double fd = (up - dn) / (2 * step);
      max_diff = std::max(max_diff, std::abs(analytic - fd));
      max_grad = std::max(max_grad, std::abs(analytic));
    };
    for (std::size_t c = 0; c < p.drift.size(); ++c)
      for (std::size_t l = 0; l < p.drift[c].a.size(); ++l) check(false, c, l, g.drift[c][l]);
    for (std::size_t l = 0; l < p.diffusion.alpha.size(); ++l) check(true, 0, l, g.diffusion[l]);
    ASSERT_GT(max_grad, 0.0);
    EXPECT_LE(max_diff / max_grad, 1e-5) << "seed " << seed;
  }
}

TEST(RiskGradient, ObjectiveGradientMatchesRiskGradient) {
  std::mt19937_64 rng(4);
  const auto data = simulate_dataset(builtin_model(BuiltinModel::Model1), 30, 40, 5);
  const auto p = random_params(3, 4, 4, data.size(), rng);
  ErmObjective obj(data, p.drift_basis, p.diffusion_basis, p.weights, p.diffusion.floor);
  std::vector<double> grad(obj.num_parameters());
  obj.value_and_gradient(obj.pack(p), grad);
  const auto g = risk_gradient(p, data);
  std::size_t i = 0;
  for (const auto& block : g.drift)
    for (double v : block) EXPECT_EQ(grad[i++], v);
  for (double v : g.diffusion) EXPECT_EQ(grad[i++], v);
}

TEST(TrainErm, DescentConstraintsAndDeterminism) {
  const auto data = simulate_dataset(builtin_model(BuiltinModel::Model1), 300, 50, 21);
  TrainConfig cfg;
  cfg.seed = 9;
  cfg.n_restarts = 2;
  const auto fit = train_erm(data, cfg);
  EXPECT_LE(fit.train_risk, fit.initial_risk);
  ASSERT_FALSE(fit.risk_trace.empty());
  for (std::size_t i = 1; i < fit.risk_trace.size(); ++i) ASSERT_LE(fit.risk_trace[i], fit.risk_trace[i - 1]);
  EXPECT_NEAR(fit.train_risk, empirical_risk(fit.params, data), 1e-10);

  const double r_drift = coefficient_radius2(cfg.drift_dim, cfg.order, data.size());
  for (const auto& d : fit.params.drift) EXPECT_LE(squared_norm(d.a), r_drift + 1e-9);
  EXPECT_NEAR(fit.params.diffusion.floor, 1.0 / std::log(300.0), 1e-15);
  for (double x = -8; x <= 8; x += 0.01)
    EXPECT_GE(eval_diffusion(fit.params.diffusion_basis, fit.params.diffusion, x), fit.params.diffusion.floor);

  const auto again = train_erm(data, cfg);
  EXPECT_EQ(again.train_risk, fit.train_risk);
  EXPECT_EQ(again.iterations, fit.iterations);
  for (std::size_t k = 0; k < fit.params.drift.size(); ++k) EXPECT_EQ(again.params.drift[k].a, fit.params.drift[k].a);
  EXPECT_EQ(again.params.diffusion.alpha, fit.params.diffusion.alpha);
}

TEST(TrainErm, SingleClassDataset) {
  const auto model = constant_model({0.0, 1.0}, 1.0, {1.0, 0.0});
  const auto data = simulate_dataset(model, 60, 40, 4);
  const auto fit = train_erm(data, TrainConfig{});
  for (const auto& p : data.paths) EXPECT_EQ(classify(fit.params, p), 1);
}

TEST(TrainErm, SeparatedModelHeldOut) {
  const auto model = separated_model(5.0);
  const auto train = simulate_dataset(model, 500, 100, 31);
  const auto test = simulate_dataset(model, 2000, 100, 32);
  TrainConfig cfg;
  cfg.drift_dim = 4;
  cfg.diffusion_dim = 4;
  const auto fit = train_erm(train, cfg);
  std::vector<int> pred;
  for (const auto& p : test.paths) pred.push_back(classify(fit.params, p));
  EXPECT_LE(error_rate(pred, test.labels), 0.05);
}

TEST(TrainErm, SplitWeights) {
  const auto data = simulate_dataset(builtin_model(BuiltinModel::Model1), 100, 30, 3);
  TrainConfig cfg;
  cfg.split_weights = true;
  EXPECT_THROW(train_erm(data, cfg), ParameterError);
  const std::vector<int> other{1, 1, 1, 2};
  const auto fit = train_erm(data, cfg, std::span<const int>(other));
  EXPECT_EQ(fit.params.weights, (std::vector<double>{0.75, 0.25, 0.0}));
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  cfg.drift_dim = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = TrainConfig{};
  cfg.n_restarts = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
}
