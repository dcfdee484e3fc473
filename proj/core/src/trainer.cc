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

#include "dpnn/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace dpnn {

absl::Status TrainingConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning_rate must be positive");
  }
  if (batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be at least 1");
  }
  if (epochs < 0) return absl::InvalidArgumentError("epochs must be >= 0");
  if (!(l2_coefficient >= 0.0)) {
    return absl::InvalidArgumentError("l2_coefficient must be >= 0");
  }
  if (loss_kind == LossKind::kConvexifiedCrossEntropy && !(alpha > 0.0)) {
    return absl::InvalidArgumentError(
        "alpha must be positive for the convexified loss");
  }
  return absl::OkStatus();
}

ModelParams InitializeParams(const NetworkTopology& topology,
                             RandomStream& rng) {
  ModelParams params;
  params.weights.resize(topology.weight_count());
  for (int t = 1; t <= topology.edge_layers(); ++t) {
    const int fan_in = topology.NeuronCount(t - 1);
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    const std::size_t begin = topology.layer_offset(t);
    const std::size_t end =
        begin + static_cast<std::size_t>(topology.width(t)) * fan_in;
    for (std::size_t k = begin; k < end; ++k) {
      params.weights[k] = limit * (2.0 * rng.Uniform() - 1.0);
    }
  }
  return params;
}

absl::StatusOr<double> Accuracy(const NetworkTopology& topology,
                                const ModelParams& params,
                                const LabeledDataset& data) {
  if (data.rows() == 0) return absl::InvalidArgumentError("empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto trace = Forward(topology, params, data.Row(i));
    if (!trace.ok()) return trace.status();
    if (static_cast<int>(Argmax(trace->probabilities)) == data.labels[i]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

absl::StatusOr<std::vector<double>> LayerMaxima(
    const NetworkTopology& topology, const ModelParams& params,
    const LabeledDataset& data) {
  std::vector<double> maxima(topology.edge_layers(), 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto trace = Forward(topology, params, data.Row(i));
    if (!trace.ok()) return trace.status();
    for (std::size_t t = 0; t < maxima.size(); ++t) {
      maxima[t] = std::max(maxima[t], trace->layer_max_abs[t]);
    }
  }
  return maxima;
}

absl::StatusOr<TrainedModel> Train(const LabeledDataset& train,
                                   const LabeledDataset* test,
                                   const NetworkTopology& topology,
                                   const TrainingConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (auto s = train.Validate(); !s.ok()) return s;
  if (train.rows() == 0) return absl::InvalidArgumentError("no training rows");
  if (train.class_count != topology.class_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has ", train.class_count,
                     " classes, topology outputs ", topology.class_count()));
  }
  if (train.feature_count != static_cast<std::size_t>(topology.input_dim())) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has ", train.feature_count,
                     " features, topology expects ", topology.input_dim()));
  }

  RandomStream rng(config.seed);
  TrainedModel model{topology, InitializeParams(topology, rng), config, {},
                     train.rows()};
  std::vector<double>& w = model.params.weights;
  std::vector<double> m(w.size(), 0.0);
  std::vector<double> v(w.size(), 0.0);
  const ObjectiveSpec objective = config.Objective();

  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  double beta1_power = 1.0;
  double beta2_power = 1.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order.begin(), order.end(), rng);
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += batch_size, ++batch_index) {
      const std::size_t size = std::min(batch_size, order.size() - begin);
      auto step = Gradients(topology, model.params, train,
                            std::span<const std::size_t>(order).subspan(
                                begin, size),
                            objective);
      if (!step.ok() || !std::isfinite(step->objective)) {
        return absl::InternalError(absl::StrCat(
            "non-finite training loss at epoch ", epoch, ", batch ",
            batch_index,
            step.ok() ? "" : absl::StrCat(": ", step.status().message())));
      }
      model.report.final_objective = step->objective;
      beta1_power *= config.adam_beta1;
      beta2_power *= config.adam_beta2;
      const double step_size = config.learning_rate *
                               std::sqrt(1.0 - beta2_power) /
                               (1.0 - beta1_power);
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double g = step->gradient[k];
        m[k] = config.adam_beta1 * m[k] + (1.0 - config.adam_beta1) * g;
        v[k] = config.adam_beta2 * v[k] + (1.0 - config.adam_beta2) * g * g;
        w[k] -= step_size * m[k] /
                (std::sqrt(v[k]) + config.adam_epsilon *
                                       std::sqrt(1.0 - beta2_power));
      }
    }
  }

  auto train_acc = Accuracy(topology, model.params, train);
  if (!train_acc.ok()) return train_acc.status();
  model.report.train_accuracy = *train_acc;
  if (test != nullptr && test->rows() > 0) {
    auto test_acc = Accuracy(topology, model.params, *test);
    if (!test_acc.ok()) return test_acc.status();
    model.report.test_accuracy = *test_acc;
  }
  auto maxima = LayerMaxima(topology, model.params, train);
  if (!maxima.ok()) return maxima.status();
  model.report.layer_maxima = std::move(*maxima);
  return model;
}

}  // namespace dpnn
