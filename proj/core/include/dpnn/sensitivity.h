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

#ifndef DPNN_SENSITIVITY_H_
#define DPNN_SENSITIVITY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/network.h"

namespace dpnn {

// Closed-form sensitivity bounds for a model whose loss is rho-Lipschitz and
// whose regularised objective is lambda-strongly convex, trained on n rows.

// Upper bound on the Lipschitz constant of the cross-entropy loss:
//
//   rho <= (C - 1) * prod_{t=0}^{T-1} sqrt(|V_t|) x_t / (C |V_{T-1}|)
//
// `neuron_counts` holds |V_0|..|V_{T-1}| (bias neurons included) and
// `layer_maxima` the matching x_t.
absl::StatusOr<double> LipschitzBound(std::span<const int> neuron_counts,
                                      int class_count,
                                      std::span<const double> layer_maxima);
absl::StatusOr<double> LipschitzBound(const NetworkTopology& topology,
                                      std::span<const double> layer_maxima);

// The objective's regulariser is c * ||W||^2 = 2 lambda ||W||^2, so the
// bounds use lambda = c / 2.
inline double StrongConvexityFromL2(double l2_coefficient) {
  return l2_coefficient / 2.0;
}

// L2 sensitivity of the trained weight vector: 2 rho / (lambda n).
double WeightVectorSensitivity(double rho, double lambda, std::size_t n);
// Per-weight L1 sensitivity: delta2_w / sqrt(|W_X|).
double WeightSensitivity(double delta2_w, std::size_t total_weights);
// Output-neuron L1 sensitivity: a_u |V_{T-1}| delta_omega.
double OutputNeuronSensitivity(double activation_bound,
                               std::size_t fan_in_output, double delta_omega);

struct ProbabilitySensitivity {
  double clipped = 0.0;  // min(raw, 1)
  double raw = 0.0;      // exp(2 delta_z) - 1
};
ProbabilitySensitivity SoftmaxProbabilitySensitivity(double delta_z);

// On-average-remove-one stability bound: 2 rho^2 / (lambda n).
double OaroBound(double rho, double lambda, std::size_t n);

struct SensitivityInputs {
  double rho = 0.0;
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t total_weights = 0;
  // |V_{T-1}|, bias neuron included.
  std::size_t fan_in_output = 0;
  // a_u; 1 for Tanh hidden layers.
  double activation_bound = 1.0;

  static SensitivityInputs ForTopology(const NetworkTopology& topology,
                                       double rho, std::size_t n,
                                       double l2_coefficient);
  absl::Status Validate() const;
};

struct SensitivityReport {
  double rho = 0.0;
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t total_weights = 0;
  std::size_t fan_in_output = 0;
  double activation_bound = 1.0;
  std::vector<double> layer_maxima;

  double delta2_w = 0.0;
  double delta_omega = 0.0;
  double delta_z = 0.0;
  double delta_p = 0.0;
  double delta_p_raw = 0.0;
  double oaro_bound = 0.0;
  // Set when delta_z (hence delta_p) is zero; such a report cannot drive
  // the exponential mechanism.
  bool degenerate = false;
};

absl::StatusOr<SensitivityReport> ComputeSensitivity(
    const SensitivityInputs& inputs);

// Full chain for a trained model: rho from its recorded x_t, then every
// bound with lambda = l2_coefficient / 2 and n training rows.
absl::StatusOr<SensitivityReport> ReportForModel(
    const NetworkTopology& topology, std::span<const double> layer_maxima,
    std::size_t n, double l2_coefficient);

// `key=value` lines, one per field.
std::string ToKeyValueText(const SensitivityReport& report);
std::string ToJson(const SensitivityReport& report);
absl::StatusOr<SensitivityReport> SensitivityReportFromJson(
    const std::string& text);

}  // namespace dpnn

#endif  // DPNN_SENSITIVITY_H_
