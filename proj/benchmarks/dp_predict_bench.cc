// Copyright 2026 The dpnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <vector>

#include "benchmark/benchmark.h"
#include "dpnn/budget.h"
#include "dpnn/dataset.h"
#include "dpnn/dp_predict.h"
#include "dpnn/mechanisms.h"
#include "dpnn/network.h"
#include "dpnn/random.h"
#include "dpnn/sensitivity.h"
#include "dpnn/trainer.h"

namespace dpnn {
namespace {

void BM_ExponentialMechanism(benchmark::State& state) {
  RandomStream rng(3);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (double& s : scores) s = rng.Uniform();
  for (auto _ : state) {
    auto v = ExponentialMechanismSample(scores, 0.5, 1.0, rng);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_ExponentialMechanism)->Arg(2)->Arg(30)->Arg(100);

void BM_SampleNoise(benchmark::State& state) {
  const auto kind = static_cast<MechanismKind>(state.range(0));
  RandomStream rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(SampleNoise(kind, 1.0, rng));
}
BENCHMARK(BM_SampleNoise)
    ->Arg(static_cast<int>(MechanismKind::kLaplace))
    ->Arg(static_cast<int>(MechanismKind::kGaussian));

// One differentially private prediction, forward pass included, against a
// plain Forward for the same shape.
void BM_PredictDp(benchmark::State& state) {
  const int classes = static_cast<int>(state.range(0));
  const NetworkTopology topology =
      *NetworkTopology::Create({40, 128, classes});
  RandomStream rng(5);
  const ModelParams params = InitializeParams(topology, rng);
  const LabeledDataset query = *MakeSynthetic(
      {.classes = classes,
       .rows = 2 * static_cast<std::size_t>(classes),
       .features = 40,
       .seed = 6});
  const SensitivityReport report =
      *ReportForModel(topology, std::vector<double>{1.0, 1.0}, 10000, 0.001);
  BudgetLedger ledger(*PrivacyBudget::ForPerQuery(
      1.0, static_cast<std::size_t>(1) << 40, classes,
      MechanismKind::kGaussian, 10000));
  const DpPredictor predictor =
      *DpPredictor::Create(topology, params, report, &ledger);
  for (auto _ : state) {
    auto p = predictor.Predict(query.Row(0), rng);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PredictDp)->Arg(2)->Arg(30)->Arg(100);

}  // namespace
}  // namespace dpnn

BENCHMARK_MAIN();
