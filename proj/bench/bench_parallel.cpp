// Serial reference vs OpenMP version of each parallel kernel.

#include <benchmark/benchmark.h>

#include <random>

#include "smash/augmentation.hpp"
#include "smash/features.hpp"
#include "smash/ml/cart.hpp"
#include "smash/ml/selection.hpp"
#include "synthetic.hpp"

using namespace smash;

namespace {

struct SplitData {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  std::vector<std::size_t> rows;
};

const SplitData& split_data() {
  static const SplitData d = [] {
    SplitData s;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (std::size_t i = 0; i < 4000; ++i) {
      std::vector<double> row(kFeatureCount);
      for (auto& v : row) v = u(rng);
      s.y.push_back(row[3] + row[7] > 100.0 ? 1.0 : 0.0);
      s.x.push_back(std::move(row));
      s.rows.push_back(i);
    }
    return s;
  }();
  return d;
}

void BM_BestSplitSerial(benchmark::State& state) {
  const auto& d = split_data();
  for (auto _ : state) benchmark::DoNotOptimize(ml::best_split_serial(d.x, d.y, d.rows, ml::Task::Classify));
}

void BM_BestSplitParallel(benchmark::State& state) {
  const auto& d = split_data();
  for (auto _ : state) benchmark::DoNotOptimize(ml::best_split_parallel(d.x, d.y, d.rows, ml::Task::Classify));
}

const std::vector<ml::LabeledExample>& cv_examples() {
  static const auto ex = testing::two_regime_examples(1500, 0.1, 3);
  return ex;
}

void BM_CrossValidateSerial(benchmark::State& state) {
  const auto& ex = cv_examples();
  const auto s = ml::split_dataset(ex.size(), 42);
  for (auto _ : state) benchmark::DoNotOptimize(ml::cross_validate_serial(ex, s.folds, ml::Task::Classify, {}));
}

void BM_CrossValidateParallel(benchmark::State& state) {
  const auto& ex = cv_examples();
  const auto s = ml::split_dataset(ex.size(), 42);
  for (auto _ : state) benchmark::DoNotOptimize(ml::cross_validate_parallel(ex, s.folds, ml::Task::Classify, {}));
}

struct BatchData {
  Workload w;
  std::vector<NormalizedCQ> queries;
  StatsCatalog stats;
};

const BatchData& batch_data() {
  static const BatchData d = [] {
    WorkloadSpec spec;
    spec.n_base_queries = 400;
    BatchData b{generate_workload(spec), {}, {}};
    const auto catalog = b.w.db.catalog();
    for (const auto& q : b.w.queries) b.queries.push_back(normalize(q, &catalog));
    b.stats = StatsCatalog::analyze(b.w.db);
    return b;
  }();
  return d;
}

void BM_ExtractBatchSerial(benchmark::State& state) {
  const auto& d = batch_data();
  for (auto _ : state) benchmark::DoNotOptimize(extract_batch_serial(d.queries, d.w.db, d.stats));
}

void BM_ExtractBatchParallel(benchmark::State& state) {
  const auto& d = batch_data();
  for (auto _ : state) benchmark::DoNotOptimize(extract_batch_parallel(d.queries, d.w.db, d.stats));
}

}  // namespace

BENCHMARK(BM_BestSplitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestSplitParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractBatchParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
