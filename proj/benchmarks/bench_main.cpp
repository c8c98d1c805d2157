#include <benchmark/benchmark.h>

#include "caslgp/clustering.hpp"
#include "caslgp/gp.hpp"
#include "caslgp/random.hpp"
#include "caslgp/subspace.hpp"
#include "caslgp/svm.hpp"
#include "caslgp/test_functions.hpp"

using namespace caslgp;

namespace {

DataSet piecewise(std::size_t n) { return generate_dataset(BenchmarkSpec{}, n, true, 1); }

void BM_PairwiseDistance(benchmark::State& state) {
  const DataSet data = piecewise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distance(data, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairwiseDistance)->RangeMultiplier(2)->Range(125, 1000)->Complexity();

void BM_AverageLinkage(benchmark::State& state) {
  const DistanceMatrix D = pairwise_distance(piecewise(static_cast<std::size_t>(state.range(0))), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate(D, 4));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AverageLinkage)->RangeMultiplier(2)->Range(125, 1000)->Complexity();

void BM_ActiveSubspace(benchmark::State& state) {
  const DataSet data = piecewise(1000);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(gradient_moment(data)));
}
BENCHMARK(BM_ActiveSubspace);

void BM_LogLikelihoodGradient(benchmark::State& state) {
  const auto n = state.range(0);
  const auto pts = sample_uniform(static_cast<std::size_t>(n), 2, -1.0, 1.0, 2);
  Matrix Z(n, 2);
  Vector Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Z.row(i) = pts[static_cast<std::size_t>(i)].transpose();
    Y[i] = Z(i, 0) * Z(i, 1);
  }
  KernelConfig k;
  k.signal_variance = 1.0;
  k.lengthscales = Vector::Constant(2, 0.5);
  k.noise_variance = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(log_marginal_likelihood_with_gradient(Z, Y, 0.0, k, true));
  state.SetComplexityN(n);
}
BENCHMARK(BM_LogLikelihoodGradient)->RangeMultiplier(2)->Range(125, 1000)->Complexity();

void BM_SvmTrain(benchmark::State& state) {
  const DataSet data = piecewise(static_cast<std::size_t>(state.range(0)));
  std::vector<int> labels;
  for (const Sample& s : data.samples()) labels.push_back(piecewise_region(s.x));
  const Matrix X = data.inputs();
  for (auto _ : state) benchmark::DoNotOptimize(train_svm(X, labels, SvmConfig{}));
}
BENCHMARK(BM_SvmTrain)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
