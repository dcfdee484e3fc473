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

#include "dpnn/network.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dpnn {
namespace {

// Activations of one sample, each layer below the output with the bias
// neuron appended.
struct SampleState {
  std::vector<std::vector<double>> layers;
  std::vector<double> logits;
  std::vector<double> probabilities;
};

void SoftmaxInto(std::span<const double> logits, std::vector<double>& out) {
  out.resize(logits.size());
  const double shift = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - shift);
    total += out[i];
  }
  for (double& p : out) p /= total;
}

void Propagate(const NetworkTopology& topology, const ModelParams& params,
               std::span<const double> x, SampleState& state) {
  const int edge_layers = topology.edge_layers();
  state.layers.resize(edge_layers);
  auto& input = state.layers[0];
  input.assign(x.begin(), x.end());
  input.push_back(1.0);
  for (int t = 1; t <= edge_layers; ++t) {
    const std::vector<double>& below = state.layers[t - 1];
    const int rows = topology.width(t);
    const int cols = topology.NeuronCount(t - 1);
    const double* w = params.weights.data() + topology.layer_offset(t);
    std::vector<double>& out =
        t == edge_layers ? state.logits : state.layers[t];
    out.resize(t == edge_layers ? rows : rows + 1);
    for (int i = 0; i < rows; ++i) {
      const double* row = w + static_cast<std::size_t>(i) * cols;
      double z = 0.0;
      for (int j = 0; j < cols; ++j) z += row[j] * below[j];
      out[i] = t == edge_layers ? z : std::tanh(z);
    }
    if (t != edge_layers) out[rows] = 1.0;
  }
  SoftmaxInto(state.logits, state.probabilities);
}

absl::Status CheckDims(const NetworkTopology& topology,
                       const ModelParams& params, std::size_t features) {
  if (params.weights.size() != topology.weight_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("model has ", params.weights.size(),
                     " weights, topology expects ", topology.weight_count()));
  }
  if (features != static_cast<std::size_t>(topology.input_dim())) {
    return absl::InvalidArgumentError(
        absl::StrCat("input has ", features, " features, model expects ",
                     topology.input_dim()));
  }
  return absl::OkStatus();
}

absl::Status CheckRows(const LabeledDataset& data,
                       std::span<const std::size_t> rows,
                       const NetworkTopology& topology) {
  for (std::size_t r : rows) {
    if (r >= data.rows()) {
      return absl::OutOfRangeError(absl::StrCat("row index ", r, " >= ",
                                                data.rows()));
    }
    const int label = data.labels[r];
    if (label < 0 || label >= topology.class_count()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, " has label ", label, " outside [0, ",
                       topology.class_count(), ")"));
    }
  }
  return absl::OkStatus();
}

double CrossEntropy(const std::vector<double>& p, int label) {
  return -std::log(std::max(p[label], kProbabilityFloor));
}

}  // namespace

NetworkTopology::NetworkTopology(std::vector<int> widths)
    : widths_(std::move(widths)) {
  offsets_.push_back(0);
  for (int t = 1; t < static_cast<int>(widths_.size()); ++t) {
    offsets_.push_back(offsets_.back() +
                       static_cast<std::size_t>(widths_[t]) *
                           static_cast<std::size_t>(NeuronCount(t - 1)));
  }
}

absl::StatusOr<NetworkTopology> NetworkTopology::Create(
    std::vector<int> widths) {
  if (widths.size() < 3) {
    return absl::InvalidArgumentError(
        "topology needs an input layer, at least one hidden layer and an "
        "output layer");
  }
  for (int w : widths) {
    if (w < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer width ", w, " must be positive"));
    }
  }
  if (widths.back() < 2) {
    return absl::InvalidArgumentError("output layer needs at least 2 classes");
  }
  return NetworkTopology(std::move(widths));
}

double ModelParams::SquaredNorm() const {
  double total = 0.0;
  for (double w : weights) total += w * w;
  return total;
}

bool ModelParams::AllFinite() const {
  return std::all_of(weights.begin(), weights.end(),
                     [](double w) { return std::isfinite(w); });
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out;
  if (!logits.empty()) SoftmaxInto(logits, out);
  return out;
}

std::size_t Argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

absl::StatusOr<ForwardTrace> Forward(const NetworkTopology& topology,
                                     const ModelParams& params,
                                     std::span<const double> x) {
  if (auto status = CheckDims(topology, params, x.size()); !status.ok()) {
    return status;
  }
  SampleState state;
  Propagate(topology, params, x, state);
  ForwardTrace trace;
  trace.activations.reserve(state.layers.size());
  for (auto& layer : state.layers) {
    double max_abs = 0.0;
    for (double a : layer) max_abs = std::max(max_abs, std::abs(a));
    trace.layer_max_abs.push_back(max_abs);
    layer.pop_back();
    trace.activations.push_back(std::move(layer));
  }
  trace.logits = std::move(state.logits);
  trace.probabilities = std::move(state.probabilities);
  return trace;
}

absl::StatusOr<std::vector<double>> SampleLosses(
    const NetworkTopology& topology, const ModelParams& params,
    const LabeledDataset& data, std::span<const std::size_t> rows) {
  if (auto s = CheckDims(topology, params, data.feature_count); !s.ok()) {
    return s;
  }
  if (auto s = CheckRows(data, rows, topology); !s.ok()) return s;
  std::vector<double> losses;
  losses.reserve(rows.size());
  SampleState state;
  for (std::size_t r : rows) {
    Propagate(topology, params, data.Row(r), state);
    losses.push_back(CrossEntropy(state.probabilities, data.labels[r]));
  }
  return losses;
}

absl::StatusOr<double> LossPlain(const NetworkTopology& topology,
                                 const ModelParams& params,
                                 const LabeledDataset& data,
                                 std::span<const std::size_t> rows) {
  if (rows.empty()) return absl::InvalidArgumentError("empty batch");
  auto losses = SampleLosses(topology, params, data, rows);
  if (!losses.ok()) return losses.status();
  double total = 0.0;
  for (double l : *losses) total += l;
  return total / static_cast<double>(losses->size());
}

absl::StatusOr<double> ConvexifiedFromLosses(std::span<const double> losses,
                                             double alpha) {
  if (!(alpha > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive, got ", alpha));
  }
  if (losses.empty()) return absl::InvalidArgumentError("empty batch");
  double shift = -std::numeric_limits<double>::infinity();
  for (double l : losses) {
    if (std::isnan(l)) return absl::InternalError("NaN sample loss");
    shift = std::max(shift, alpha * l);
  }
  double total = 0.0;
  for (double l : losses) total += std::exp(alpha * l - shift);
  return (shift + std::log(total / static_cast<double>(losses.size()))) /
         alpha;
}

absl::StatusOr<double> LossConvexified(const NetworkTopology& topology,
                                       const ModelParams& params,
                                       const LabeledDataset& data,
                                       std::span<const std::size_t> rows,
                                       double alpha) {
  if (rows.empty()) return absl::InvalidArgumentError("empty batch");
  auto losses = SampleLosses(topology, params, data, rows);
  if (!losses.ok()) return losses.status();
  return ConvexifiedFromLosses(*losses, alpha);
}

absl::StatusOr<LossAndGradient> Gradients(const NetworkTopology& topology,
                                          const ModelParams& params,
                                          const LabeledDataset& data,
                                          std::span<const std::size_t> rows,
                                          const ObjectiveSpec& objective) {
  if (auto s = CheckDims(topology, params, data.feature_count); !s.ok()) {
    return s;
  }
  if (auto s = CheckRows(data, rows, topology); !s.ok()) return s;
  if (objective.loss_kind == LossKind::kConvexifiedCrossEntropy &&
      !(objective.alpha > 0.0)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }

  LossAndGradient result;
  result.gradient.assign(params.weights.size(), 0.0);
  const double reg = objective.l2_coefficient;
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    result.gradient[k] = 2.0 * reg * params.weights[k];
  }
  const double reg_value = reg * params.SquaredNorm();
  if (rows.empty()) {
    result.objective = reg_value;
    return result;
  }

  // Forward every sample, keeping activations and output deltas.
  const std::size_t batch = rows.size();
  std::vector<SampleState> states(batch);
  std::vector<double> losses(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    Propagate(topology, params, data.Row(rows[b]), states[b]);
    losses[b] = CrossEntropy(states[b].probabilities, data.labels[rows[b]]);
  }

  // d(loss)/d(l_i).
  std::vector<double> sample_weight(batch, 1.0 / static_cast<double>(batch));
  if (objective.loss_kind == LossKind::kConvexifiedCrossEntropy) {
    auto value = ConvexifiedFromLosses(losses, objective.alpha);
    if (!value.ok()) return value.status();
    result.loss = *value;
    double shift = -std::numeric_limits<double>::infinity();
    for (double l : losses) shift = std::max(shift, objective.alpha * l);
    double total = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      sample_weight[b] = std::exp(objective.alpha * losses[b] - shift);
      total += sample_weight[b];
    }
    for (double& w : sample_weight) w /= total;
  } else {
    double total = 0.0;
    for (double l : losses) total += l;
    result.loss = total / static_cast<double>(batch);
  }
  result.objective = result.loss + reg_value;
  if (!std::isfinite(result.objective)) {
    return absl::InternalError("non-finite objective value");
  }

  const int edge_layers = topology.edge_layers();
  std::vector<double> delta;
  std::vector<double> delta_below;
  for (std::size_t b = 0; b < batch; ++b) {
    SampleState& s = states[b];
    const int label = data.labels[rows[b]];
    delta = s.probabilities;
    if (s.probabilities[label] > kProbabilityFloor) {
      delta[label] -= 1.0;
    } else {
      // Loss is clamped flat here.
      std::fill(delta.begin(), delta.end(), 0.0);
    }
    for (double& d : delta) d *= sample_weight[b];

    for (int t = edge_layers; t >= 1; --t) {
      const std::vector<double>& below = s.layers[t - 1];
      const int rows_t = topology.width(t);
      const int cols = topology.NeuronCount(t - 1);
      const std::size_t offset = topology.layer_offset(t);
      const double* w = params.weights.data() + offset;
      double* g = result.gradient.data() + offset;
      for (int i = 0; i < rows_t; ++i) {
        const double d = delta[i];
        if (d == 0.0) continue;
        double* grow = g + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) grow[j] += d * below[j];
      }
      if (t == 1) break;
      const int width_below = topology.width(t - 1);
      delta_below.assign(width_below, 0.0);
      for (int i = 0; i < rows_t; ++i) {
        const double d = delta[i];
        if (d == 0.0) continue;
        const double* wrow = w + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < width_below; ++j) delta_below[j] += d * wrow[j];
      }
      for (int j = 0; j < width_below; ++j) {
        delta_below[j] *= 1.0 - below[j] * below[j];
      }
      delta.swap(delta_below);
    }
  }
  return result;
}

}  // namespace dpnn
