#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sdeclass/sdeclass.hpp"

using namespace sdeclass;

static void BM_SplineEvalLocal(benchmark::State& state) {
  SplineBasis basis(static_cast<int>(state.range(0)), 8, std::log(1000.0));
  std::vector<double> out(basis.order() + 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::vector<double> xs(1024);
  for (double& x : xs) x = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(basis.eval_local(xs[i++ & 1023], out));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_SplineEvalLocal)->Arg(1)->Arg(3)->Arg(5);

static void BM_SimulateDataset(benchmark::State& state) {
  const auto model = builtin_model(BuiltinModel::Model3);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_dataset(model, 100, static_cast<int>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * 100 * state.range(0));
}
BENCHMARK(BM_SimulateDataset)->Arg(100)->Arg(500);

static void BM_OraclePosterior(benchmark::State& state) {
  const auto model = builtin_model(BuiltinModel::Model3);
  const OracleScore oracle{model};
  const auto data = simulate_dataset(model, 64, 500, 2);
  std::size_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_posterior(oracle, data.paths[j++ & 63]));
}
BENCHMARK(BM_OraclePosterior);

static void BM_ErmObjectiveGradient(benchmark::State& state) {
  const auto data = simulate_dataset(builtin_model(BuiltinModel::Model1), static_cast<int>(state.range(0)), 100, 3);
  const std::size_t n = data.size();
  const double a = std::log(static_cast<double>(n));
  ErmObjective obj(data, SplineBasis(3, 4, a), SplineBasis(3, 4, a), estimate_weights(data.labels, 3), 1.0 / a);
  std::vector<double> x(obj.num_parameters(), 0.1);
  std::vector<double> g(x.size());
  for (auto _ : state) benchmark::DoNotOptimize(obj.value_and_gradient(x, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ErmObjectiveGradient)->Arg(100)->Arg(1000);

static void BM_KnnClassify(benchmark::State& state) {
  const auto train = simulate_dataset(builtin_model(BuiltinModel::Model1), 1000, 100, 4);
  const auto test = simulate_dataset(builtin_model(BuiltinModel::Model1), 16, 100, 5);
  KnnOptions opt;
  opt.fixed_k = 11;
  const auto model = knn_fit(train, opt);
  std::size_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(knn_classify(model, test.paths[j++ & 15]));
}
BENCHMARK(BM_KnnClassify);
BENCHMARK_MAIN();
