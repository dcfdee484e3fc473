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

#ifndef DPNN_NETWORK_H_
#define DPNN_NETWORK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/dataset.h"

namespace dpnn {

enum class HiddenActivation { kTanh };
enum class OutputActivation { kSoftmax };

// Fully connected feed-forward layout. Widths exclude bias neurons: the
// input layer and every hidden layer carry one extra bias neuron fixed at 1,
// the output layer does not. Layer t (1..T) has a weight matrix of shape
// width(t) x NeuronCount(t - 1), stored row-major with the bias weight last.
class NetworkTopology {
 public:
  // `widths` = {input features, hidden..., classes}. Requires at least one
  // hidden layer and at least two classes.
  static absl::StatusOr<NetworkTopology> Create(std::vector<int> widths);

  // Number of weight layers T.
  int edge_layers() const { return static_cast<int>(widths_.size()) - 1; }
  int input_dim() const { return widths_.front(); }
  int class_count() const { return widths_.back(); }
  int width(int layer) const { return widths_[layer]; }
  const std::vector<int>& widths() const { return widths_; }

  // |V_t|: width plus the bias neuron for every layer below the output.
  int NeuronCount(int layer) const {
    return layer < edge_layers() ? widths_[layer] + 1 : widths_[layer];
  }
  // |W_X|, every edge including bias edges.
  std::size_t weight_count() const { return offsets_.back(); }
  // Offset of layer t's matrix (t in 1..T) in the flat weight vector.
  std::size_t layer_offset(int layer) const { return offsets_[layer - 1]; }

  HiddenActivation hidden_activation() const { return HiddenActivation::kTanh; }
  OutputActivation output_activation() const {
    return OutputActivation::kSoftmax;
  }

  friend bool operator==(const NetworkTopology&,
                         const NetworkTopology&) = default;

 private:
  explicit NetworkTopology(std::vector<int> widths);

  std::vector<int> widths_;
  std::vector<std::size_t> offsets_;
};

// All edge weights, layer-major then row-major.
struct ModelParams {
  std::vector<double> weights;

  double SquaredNorm() const;
  bool AllFinite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ForwardTrace {
  // activations[t] for t < T, without the bias neuron.
  std::vector<std::vector<double>> activations;
  // Pre-softmax output values z_T.
  std::vector<double> logits;
  std::vector<double> probabilities;
  // Largest |value| over each layer t < T, bias neuron included.
  std::vector<double> layer_max_abs;
};

// Max-shifted softmax.
std::vector<double> Softmax(std::span<const double> logits);

absl::StatusOr<ForwardTrace> Forward(const NetworkTopology& topology,
                                     const ModelParams& params,
                                     std::span<const double> x);

// Probability floor inside the cross-entropy.
inline constexpr double kProbabilityFloor = 1e-12;

// Mean of -ln(p_true) over `rows` (all rows when empty span is not wanted,
// pass every index). The regulariser is not included.
absl::StatusOr<double> LossPlain(const NetworkTopology& topology,
                                 const ModelParams& params,
                                 const LabeledDataset& data,
                                 std::span<const std::size_t> rows);

// (1/alpha) ln( mean_i exp(alpha * l_i) ), evaluated with a max shift.
absl::StatusOr<double> ConvexifiedFromLosses(std::span<const double> losses,
                                             double alpha);

absl::StatusOr<double> LossConvexified(const NetworkTopology& topology,
                                       const ModelParams& params,
                                       const LabeledDataset& data,
                                       std::span<const std::size_t> rows,
                                       double alpha);

// Per-sample cross-entropy values l_i.
absl::StatusOr<std::vector<double>> SampleLosses(
    const NetworkTopology& topology, const ModelParams& params,
    const LabeledDataset& data, std::span<const std::size_t> rows);

enum class LossKind { kCrossEntropy, kConvexifiedCrossEntropy };

struct ObjectiveSpec {
  LossKind loss_kind = LossKind::kCrossEntropy;
  double alpha = 1.0;
  // Multiplier c of ||W||_2^2.
  double l2_coefficient = 0.0;
};

struct LossAndGradient {
  // Selected data loss (without the regulariser).
  double loss = 0.0;
  // loss + l2_coefficient * ||W||^2.
  double objective = 0.0;
  std::vector<double> gradient;
};

// Gradient of the objective with respect to every weight. An empty `rows`
// yields the regulariser-only gradient.
absl::StatusOr<LossAndGradient> Gradients(const NetworkTopology& topology,
                                          const ModelParams& params,
                                          const LabeledDataset& data,
                                          std::span<const std::size_t> rows,
                                          const ObjectiveSpec& objective);

// Index of the largest entry; ties go to the lowest index.
std::size_t Argmax(std::span<const double> values);

}  // namespace dpnn

#endif  // DPNN_NETWORK_H_
