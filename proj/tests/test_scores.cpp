#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdeclass/baselines.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/scores.hpp"
#include "test_support.hpp"

using namespace sdeclass;
using namespace sdeclass::test_util;

namespace {

// Straight-line reimplementation of the spline functionals.
std::vector<double> naive_functionals(const ScoreParams& p, const Path& path) {
  std::vector<double> f(p.drift.size(), 0.0);
  for (std::size_t k = 0; k < p.drift.size(); ++k) {
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
      const double x = path.values[i];
      const auto bd = p.drift_basis.eval(x);
      const auto bs = p.diffusion_basis.eval(x);
      double b = 0.0;
      double s = 0.0;
      for (std::size_t l = 0; l < bd.size(); ++l) b += p.drift[k].a[l] * bd[l];
      for (std::size_t l = 0; l < bs.size(); ++l) s += p.diffusion.alpha[l] * bs[l];
      s = std::max(s, p.diffusion.floor);
      f[k] += b / s * (path.values[i + 1] - x) - 0.5 * path.delta * b * b / s;
    }
  }
  return f;
}

}  // namespace

TEST(Softmax, Examples) {
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto a = softmax_weighted(std::vector<double>{0, 0, 0}, third);
  for (double v : a) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
  auto b = softmax_weighted(std::vector<double>{0, 0}, std::vector<double>{0.9, 0.1});
  EXPECT_NEAR(b[0], 0.9, 1e-15);
  EXPECT_NEAR(b[1], 0.1, 1e-15);
  auto c = softmax_weighted(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5});
  EXPECT_NEAR(c[0], 0.73106, 1e-5);
  EXPECT_NEAR(c[1], 0.26894, 1e-5);
  EXPECT_NEAR(c[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
}

TEST(Softmax, Errors) {
  EXPECT_THROW(softmax_weighted(std::vector<double>{0, 0}, std::vector<double>{1.0}), ParameterError);
  EXPECT_THROW(softmax_weighted(std::vector<double>{0, 0}, std::vector<double>{1.5, -0.5}), ParameterError);
  EXPECT_THROW(softmax_weighted(std::vector<double>{0, 0}, std::vector<double>{0.0, 0.0}), ParameterError);
}

TEST(Softmax, NormalizationAndExtremes) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const int k = 2 + i % 6;
    auto x = random_vector(k, rng, -800, 800);
    auto p = random_vector(k, rng, 0.0, 1.0);
    const auto out = softmax_weighted(x, p);
    double s = 0.0;
    for (double v : out) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_GE(v, 0.0);
      s += v;
    }
    ASSERT_NEAR(s, 1.0, 1e-10);
  }
  // A huge score on a zero-weight class must not swamp the others.
  auto out = softmax_weighted(std::vector<double>{1e6, 0.0, 1.0}, std::vector<double>{0.0, 0.5, 0.5});
  EXPECT_EQ(out[0], 0.0);
  EXPECT_NEAR(out[1] + out[2], 1.0, 1e-15);
}

TEST(Girsanov, ZeroDrift) {
  std::mt19937_64 rng(2);
  const auto path = random_path(50, rng);
  EXPECT_EQ(girsanov_functional(path, [](double) { return 0.0; }, [](double) { return 1.0; }), 0.0);
}

TEST(Girsanov, ConstantDriftIdentity) {
  const auto path = make_path({0.0, 0.3, -0.1, 0.5});
  const double f = girsanov_functional(path, [](double) { return 2.0; }, [](double) { return 1.0; });
  EXPECT_NEAR(f, -1.0, 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_path(10 + i % 300, rng);
    const double c = u(rng);
    const double got = girsanov_functional(p, [c](double) { return c; }, [](double) { return 1.0; });
    ASSERT_NEAR(got, c * (p.values.back() - p.values.front()) - c * c / 2, 1e-12);
  }
}

TEST(Girsanov, NonPositiveDiffusion) {
  const auto path = make_path({0.0, 0.3, -0.1, 0.5});
  EXPECT_THROW(girsanov_functional(path, [](double) { return 1.0; }, [](double) { return 0.0; }),
               EvaluationError);
}

TEST(Girsanov, ItoSumIsLinearInDrift) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto path = random_path(80, rng);
    const auto c = random_vector(4, rng);
    auto b1 = [&](double x) { return c[0] + c[1] * std::sin(x); };
    auto b2 = [&](double x) { return c[2] * x + c[3]; };
    auto s2 = [](double x) { return 1.0 + 0.5 * std::cos(x); };
    // With delta forced to 0 only the Ito sum remains.
    Path ito_only = path;
    ito_only.delta = 0.0;
    const double f1 = girsanov_functional(ito_only, b1, s2);
    const double f2 = girsanov_functional(ito_only, b2, s2);
    const double f12 = girsanov_functional(ito_only, [&](double x) { return 2.0 * b1(x) - 3.0 * b2(x); }, s2);
    ASSERT_NEAR(f12, 2.0 * f1 - 3.0 * f2, 1e-12);
  }
}

TEST(SplineScore, MatchesNaiveLoop) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto params = random_params(2 + trial % 4, 2 + trial % 7, 2 + trial % 5, 500, rng);
    const auto path = random_path(100, rng, 3.0);
    const auto fast = girsanov_functionals(params, path);
    const auto slow = naive_functionals(params, path);
    for (std::size_t k = 0; k < fast.size(); ++k) ASSERT_NEAR(fast[k], slow[k], 1e-12);
  }
}

TEST(SplineScore, ZeroDriftGivesWeights) {
  std::mt19937_64 rng(6);
  const std::vector<double> w{0.2, 0.5, 0.3};
  const auto params = neutral_params(3, 3, 4, 4, 1000, w);
  const auto post = posterior(params, random_path(100, rng));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(post[k], w[k]);
}

TEST(SplineScore, SymmetricClasses) {
  std::mt19937_64 rng(7);
  auto params = random_params(2, 4, 4, 1000, rng);
  params.drift[1] = params.drift[0];
  params.weights = {0.5, 0.5};
  const auto post = posterior(params, random_path(100, rng));
  EXPECT_DOUBLE_EQ(post[0], 0.5);
  EXPECT_DOUBLE_EQ(post[1], 0.5);
}

TEST(SplineScore, ConstantDriftPosterior) {
  auto params = neutral_params(2, 3, 4, 4, 1000, {0.5, 0.5});
  for (double& a : params.drift[0].a) a = 1.0;
  const auto path = make_path({0.0, 0.2, 0.1, -0.3, 0.4});
  const auto post = posterior(params, path);
  const auto expect = softmax_weighted(std::vector<double>{0.4 - 0.5, 0.0}, params.weights);
  EXPECT_NEAR(post[0], expect[0], 1e-12);
  EXPECT_NEAR(post[1], expect[1], 1e-12);
}

TEST(SplineScore, PosteriorAndScoreInvariants) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 5;
    const auto params = random_params(k, 4, 4, 1000, rng);
    const auto path = random_path(30, rng, 2.0);
    const auto post = posterior(params, path);
    double s = 0.0;
    for (double v : post) s += v;
    ASSERT_NEAR(s, 1.0, 1e-10);
    const auto h = score(params, path);
    double hs = 0.0;
    for (double v : h) {
      ASSERT_GE(v, -1.0);
      ASSERT_LE(v, 1.0);
      hs += v;
    }
    ASSERT_NEAR(hs, 2.0 - k, 1e-10);
  }
}

TEST(SplineScore, ShiftInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 500; ++trial) {
    auto f = random_vector(4, rng, -10, 10);
    auto p = random_vector(4, rng, 0.1, 1.0);
    const auto a = softmax_weighted(f, p);
    const double c = u(rng);
    for (double& v : f) v += c;
    const auto b = softmax_weighted(f, p);
    for (int k = 0; k < 4; ++k) ASSERT_NEAR(a[k], b[k], 1e-10);
  }
}

TEST(ScoreFromPosterior, Examples) {
  auto a = score_from_posterior(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (double v : a) EXPECT_NEAR(v, -1.0 / 3, 1e-15);
  EXPECT_EQ(score_from_posterior(std::vector<double>{1.0, 0.0}), (std::vector<double>{1.0, -1.0}));
  auto c = score_from_posterior(std::vector<double>{0.73106, 0.26894});
  EXPECT_NEAR(c[0], 0.46212, 1e-5);
  EXPECT_NEAR(c[1], -0.46212, 1e-5);
}

TEST(Argmax, Examples) {
  EXPECT_EQ(argmax_class(std::vector<double>{0.2, 0.7, -0.9}), 2);
  EXPECT_EQ(argmax_class(std::vector<double>{0.5, 0.5}), 1);
}

TEST(Argmax, AffineInvariance) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  std::uniform_real_distribution<double> shift(-100, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    auto h = random_vector(2 + trial % 6, rng);
    const int before = argmax_class(h);
    const double a = scale(rng);
    const double b = shift(rng);
    for (double& v : h) v = a * v + b;
    ASSERT_EQ(argmax_class(h), before);
  }
}

TEST(Oracle, EqualDriftsFollowWeights) {
  const auto m = constant_model({0.7, 0.7}, 1.0, {0.9, 0.1});
  const OracleScore oracle{m};
  const auto d = simulate_dataset(m, 200, 50, 3);
  for (const auto& p : d.paths) {
    EXPECT_EQ(oracle_classify(oracle, p), 1);
    const auto post = oracle_posterior(oracle, p);
    EXPECT_NEAR(post[0], 0.9, 1e-12);
  }
}

TEST(Oracle, SeparatedModelIsAccurate) {
  const auto m = separated_model(5.0);
  const OracleScore oracle{m};
  const auto d = simulate_dataset(m, 10000, 100, 12);
  std::vector<int> pred;
  for (const auto& p : d.paths) pred.push_back(oracle_classify(oracle, p));
  EXPECT_LE(error_rate(pred, d.labels), 0.05);
}

TEST(Oracle, MatchesGenericFunctional) {
  const auto m = builtin_model(BuiltinModel::Model3);
  const OracleScore oracle{m};
  const auto d = simulate_dataset(m, 20, 100, 13);
  for (const auto& p : d.paths) {
    std::vector<double> f;
    for (const auto& b : m.drifts)
      f.push_back(girsanov_functional(p, b, [&](double x) { return m.diffusion(x) * m.diffusion(x); }));
    const auto expect = softmax_weighted(f, m.class_probs);
    const auto got = oracle_posterior(oracle, p);
    for (std::size_t k = 0; k < f.size(); ++k) ASSERT_NEAR(got[k], expect[k], 1e-12);
  }
}

TEST(ZhangGap, Examples) {
  EXPECT_EQ(zhang_gap(0.0), 0.0);
  EXPECT_NEAR(zhang_gap(2.0), 1.0, 1e-15);
  EXPECT_NEAR(zhang_gap(0.5), 0.5, 1e-15);
  EXPECT_THROW(zhang_gap(-0.1), ParameterError);
}

TEST(ScoreParams, Validation) {
  auto p = neutral_params(2, 3, 4, 4, 100, {0.5, 0.5});
  EXPECT_NO_THROW(p.validate());
  p.weights = {0.5, 0.6};
  EXPECT_THROW(p.validate(), ParameterError);
  p = neutral_params(2, 3, 4, 4, 100, {0.5, 0.5});
  p.drift[0].a.pop_back();
  EXPECT_THROW(p.validate(), ParameterError);
}
