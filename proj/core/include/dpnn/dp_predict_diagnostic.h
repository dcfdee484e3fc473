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

#ifndef DPNN_DP_PREDICT_DIAGNOSTIC_H_
#define DPNN_DP_PREDICT_DIAGNOSTIC_H_

// NOT PRIVATE. Everything here exposes the clean logits and the injected
// noise, which voids the differential-privacy guarantee. Lives in the
// separate dpnn_diagnostics library for tests and debugging only.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpnn/budget.h"
#include "dpnn/network.h"
#include "dpnn/random.h"
#include "dpnn/sensitivity.h"

namespace dpnn::diagnostic {

struct DiagnosticOptions {
  // Replaces delta_z / epsilon_neuron; 0 disables the noise draw.
  std::optional<double> noise_scale;
  std::optional<std::size_t> forced_neuron;
  std::optional<double> forced_noise;
};

struct DiagnosticPrediction {
  std::vector<double> clean_logits;
  std::vector<double> clean_probabilities;
  std::vector<double> noisy_logits;
  std::vector<double> probabilities;
  std::size_t sampled_neuron = 0;
  double noise = 0.0;
};

// The prediction procedure with its internals exposed. Does not touch any
// budget ledger.
absl::StatusOr<DiagnosticPrediction> PredictWithTrace(
    const NetworkTopology& topology, const ModelParams& params,
    const SensitivityReport& report, const PrivacyBudget& budget,
    std::span<const double> x, RandomStream& rng,
    const DiagnosticOptions& options = {});

}  // namespace dpnn::diagnostic

#endif  // DPNN_DP_PREDICT_DIAGNOSTIC_H_
