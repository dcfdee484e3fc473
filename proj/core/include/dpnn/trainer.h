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

#ifndef DPNN_TRAINER_H_
#define DPNN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/dataset.h"
#include "dpnn/network.h"
#include "dpnn/random.h"

namespace dpnn {

// Defaults follow the baseline configuration: Adam, learning rate 1e-3,
// batch 100, 100 epochs, L2 coefficient 1e-3.
struct TrainingConfig {
  double learning_rate = 0.001;
  int batch_size = 100;
  int epochs = 100;
  // Multiplier of ||W||_2^2. The strong-convexity constant is half of it.
  double l2_coefficient = 0.001;
  // Risk factor of the convexified loss.
  double alpha = 1.0;
  LossKind loss_kind = LossKind::kCrossEntropy;
  uint64_t seed = 0;

  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  absl::Status Validate() const;
  ObjectiveSpec Objective() const {
    return {loss_kind, alpha, l2_coefficient};
  }
};

struct TrainingReport {
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;
  double final_objective = 0.0;
  // x_t for t in [0, T-1]: largest |neuron value| over one pass of the
  // training set, bias neuron included.
  std::vector<double> layer_maxima;
};

struct TrainedModel {
  NetworkTopology topology;
  ModelParams params;
  TrainingConfig config;
  TrainingReport report;
  std::size_t training_rows = 0;
};

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer.
ModelParams InitializeParams(const NetworkTopology& topology,
                             RandomStream& rng);

// Mini-batch Adam. Batches are reshuffled every epoch from `config.seed`.
// A non-finite objective aborts with an InternalError naming epoch and batch.
absl::StatusOr<TrainedModel> Train(const LabeledDataset& train,
                                   const LabeledDataset* test,
                                   const NetworkTopology& topology,
                                   const TrainingConfig& config);

// Fraction of rows whose argmax prediction equals the label.
absl::StatusOr<double> Accuracy(const NetworkTopology& topology,
                                const ModelParams& params,
                                const LabeledDataset& data);

// x_t over every row of `data`.
absl::StatusOr<std::vector<double>> LayerMaxima(
    const NetworkTopology& topology, const ModelParams& params,
    const LabeledDataset& data);

}  // namespace dpnn

#endif  // DPNN_TRAINER_H_
