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


#include <cstddef>
#include <numeric>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpnn/dataset.h"
#include "dpnn/network.h"
#include "dpnn/random.h"
#include "dpnn/trainer.h"

namespace dpnn {
namespace {

// {features, hidden, classes}: Adult-like and Texas-like shapes.
void Shapes(benchmark::internal::Benchmark* b) {
  b->Args({14, 128, 2});
  b->Args({6169, 128, 100});
}

NetworkTopology Topology(const benchmark::State& state) {
  return *NetworkTopology::Create({static_cast<int>(state.range(0)),
                                   static_cast<int>(state.range(1)),
                                   static_cast<int>(state.range(2))});
}

LabeledDataset Data(const NetworkTopology& topology, std::size_t rows) {
  return *MakeSynthetic({.classes = topology.class_count(),
                         .rows = rows,
                         .features = topology.input_dim(),
                         .separation = 1.0,
                         .seed = 1});
}

void BM_Forward(benchmark::State& state) {
  const NetworkTopology topology = Topology(state);
  RandomStream rng(1);
  const ModelParams params = InitializeParams(topology, rng);
  const LabeledDataset data = Data(topology, 2);
  for (auto _ : state) {
    auto trace = Forward(topology, params, data.Row(0));
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_Forward)->Apply(Shapes);

void BM_GradientsBatch100(benchmark::State& state) {
  const NetworkTopology topology = Topology(state);
  RandomStream rng(1);
  const ModelParams params = InitializeParams(topology, rng);
  const LabeledDataset data = Data(topology, 100);
  std::vector<std::size_t> rows(100);
  std::iota(rows.begin(), rows.end(), 0);
  const ObjectiveSpec objective{.loss_kind = LossKind::kConvexifiedCrossEntropy,
                                .alpha = 1.0,
                                .l2_coefficient = 0.001};
  for (auto _ : state) {
    auto grad = Gradients(topology, params, data, rows, objective);
    benchmark::DoNotOptimize(grad);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GradientsBatch100)->Apply(Shapes)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const NetworkTopology topology = *NetworkTopology::Create({14, 128, 2});
  const LabeledDataset data = Data(topology, static_cast<std::size_t>(
                                                 state.range(0)));
  TrainingConfig config;
  config.epochs = 1;
  for (auto _ : state) {
    auto model = Train(data, nullptr, topology, config);
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpnn

BENCHMARK_MAIN();
