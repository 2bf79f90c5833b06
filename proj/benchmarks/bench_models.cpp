#include <benchmark/benchmark.h>

#include "fliplab/data.hpp"
#include "fliplab/gbt.hpp"
#include "fliplab/model.hpp"
#include "fliplab/poison.hpp"

namespace {

using namespace fliplab;

const Standardized& data() {
  static const Standardized s = [] {
    const Dataset d = synthesize(SynthSpec{}, 1);
    const Split sp = split(d, 0.8, true, 2);
    return standardize(sp.train, sp.test);
  }();
  return s;
}

void BM_Fit(benchmark::State& state) {
  const auto family = static_cast<ModelFamily>(state.range(0));
  const ModelSpec spec = ModelSpec::defaults(family, 3);
  state.SetLabel(std::string(name(family)));
  for (auto _ : state) benchmark::DoNotOptimize(fit(spec, data().train));
}
BENCHMARK(BM_Fit)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_PredictTestSplit(benchmark::State& state) {
  const auto family = static_cast<ModelFamily>(state.range(0));
  const TrainedModel m = fit(ModelSpec::defaults(family, 3), data().train);
  state.SetLabel(std::string(name(family)));
  for (auto _ : state) benchmark::DoNotOptimize(m.predict_proba(data().test.features()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data().test.size()));
}
BENCHMARK(BM_PredictTestSplit)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

void BM_NewtonTree(benchmark::State& state) {
  const Matrix& x = data().train.features();
  const Matrix margins = Matrix::Zero(x.rows(), kNumClasses);
  std::vector<double> g;
  std::vector<double> h;
  softmax_grad_hess(margins, data().train.labels(), 3, g, h);
  const NewtonTreeOptions opts{static_cast<int>(state.range(0)), 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(grow_newton_tree(x, g, h, opts));
}
BENCHMARK(BM_NewtonTree)->Arg(2)->Arg(4)->Arg(6);

void BM_PlanFlips(benchmark::State& state) {
  const LabelVector& y = data().train.labels();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan_flips(y, FlipScenario::kS1ToHigh, 0.5, ++seed));
}
BENCHMARK(BM_PlanFlips);

}  // namespace
