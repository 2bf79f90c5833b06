#include <benchmark/benchmark.h>

#include "fliplab/data.hpp"
#include "fliplab/model.hpp"
#include "fliplab/xai.hpp"

namespace {

using namespace fliplab;

struct Fixture {
  Standardized data;
  TrainedModel model;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    const Dataset d = synthesize(SynthSpec{}, 1);
    const Split sp = split(d, 0.8, true, 2);
    Standardized s = standardize(sp.train, sp.test);
    TrainedModel m = fit(ModelSpec::defaults(ModelFamily::kGbt, 3), s.train);
    return Fixture{std::move(s), std::move(m)};
  }();
  return f;
}

void BM_Shap(benchmark::State& state) {
  const Fixture& f = fixture();
  const Matrix bg = sample_background(f.data.train.features(), static_cast<std::size_t>(state.range(1)), 4);
  const Matrix row = f.data.test.features().row(0);
  ShapOptions opts;
  opts.n_permutations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shap_values(f.model, std::span(row.data(), kNumFeatures), bg, opts, 1));
  }
}
BENCHMARK(BM_Shap)->Args({8, 50})->Args({16, 100})->Unit(benchmark::kMillisecond);

void BM_Lime(benchmark::State& state) {
  const Fixture& f = fixture();
  const Matrix row = f.data.test.features().row(0);
  LimeOptions opts;
  opts.n_samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lime_explain(f.model, std::span(row.data(), kNumFeatures), f.data.params, opts, 1));
  }
}
BENCHMARK(BM_Lime)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PermutationImportance(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        permutation_importance(f.model, f.data.test.features(), f.data.test.labels(), 5, 1));
  }
}
BENCHMARK(BM_PermutationImportance)->Unit(benchmark::kMillisecond);

void BM_Surrogate(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(surrogate_tree(f.model, f.data.train.features(), static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Surrogate)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
