#include <benchmark/benchmark.h>

#include "stratcv/boosting.hpp"
#include "stratcv/crossval.hpp"
#include "stratcv/experiments.hpp"

namespace {

stratcv::LabeledData reference_training_set(std::size_t n) {
  stratcv::ExperimentConfig cfg;
  const auto model = stratcv::reference_model(cfg);
  stratcv::Rng rng(7);
  const auto records = stratcv::generate_records(model, n, rng);
  return stratcv::to_labeled(records);
}

void BM_SortColumns(benchmark::State& state) {
  const auto data = reference_training_set(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    stratcv::SortedColumns sorted(data.x);
    benchmark::DoNotOptimize(sorted);
  }
}
BENCHMARK(BM_SortColumns)->Arg(9600);

void BM_BuildTreeDepth3(benchmark::State& state) {
  const auto data = reference_training_set(static_cast<std::size_t>(state.range(0)));
  const stratcv::SortedColumns sorted(data.x);
  std::vector<stratcv::GradPair> gh(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) gh[i] = stratcv::logistic_grad_hess(0.0, data.y[i]);
  const stratcv::TrainConfig config;
  for (auto _ : state) {
    auto tree = stratcv::build_tree(data.x, sorted, gh, config);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_BuildTreeDepth3)->Arg(2400)->Arg(9600);

void BM_Train(benchmark::State& state) {
  const auto data = reference_training_set(9600);
  stratcv::TrainConfig config;
  config.rounds = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto res = stratcv::train(data, config);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_Train)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
