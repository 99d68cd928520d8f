#include <benchmark/benchmark.h>

#include "stratcv/experiments.hpp"

namespace {

void BM_GenerateRecords(benchmark::State& state) {
  stratcv::ExperimentConfig cfg;
  const auto model = stratcv::reference_model(cfg);
  for (auto _ : state) {
    stratcv::Rng rng(1);
    auto records = stratcv::generate_records(model, 10000, rng);
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(BM_GenerateRecords);

void BM_InjectDuplicates(benchmark::State& state) {
  stratcv::ExperimentConfig cfg;
  const auto model = stratcv::reference_model(cfg);
  stratcv::Rng rng(1);
  const auto fed = stratcv::assign_hospitals(stratcv::generate_records(model, 10000, rng), 5, rng);
  for (auto _ : state) {
    stratcv::Rng r(2);
    auto dup = stratcv::inject_duplicates(fed, 2000, r);
    benchmark::DoNotOptimize(dup);
  }
}
BENCHMARK(BM_InjectDuplicates);

void BM_StratifiedPartition(benchmark::State& state) {
  stratcv::ExperimentConfig cfg;
  const auto model = stratcv::reference_model(cfg);
  stratcv::Rng rng(1);
  const auto fed = stratcv::inject_duplicates(
      stratcv::assign_hospitals(stratcv::generate_records(model, 10000, rng), 5, rng), 2000, rng);
  for (auto _ : state) {
    auto folds = stratcv::stratified_partition(fed, stratcv::compute_thresholds(fed, 1, 5));
    benchmark::DoNotOptimize(folds);
  }
}
BENCHMARK(BM_StratifiedPartition);

void BM_Audit(benchmark::State& state) {
  stratcv::ExperimentConfig cfg;
  const auto model = stratcv::reference_model(cfg);
  stratcv::Rng rng(1);
  const auto fed = stratcv::inject_duplicates(
      stratcv::assign_hospitals(stratcv::generate_records(model, 10000, rng), 5, rng), 2000, rng);
  const auto folds = stratcv::random_partition(fed, 5, rng);
  for (auto _ : state) {
    auto report = stratcv::audit(fed, &folds);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_Audit);

}  // namespace
