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

#ifndef DPNN_SRC_DP_PREDICT_INTERNAL_H_
#define DPNN_SRC_DP_PREDICT_INTERNAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpnn/mechanisms.h"
#include "dpnn/random.h"

namespace dpnn::internal {

struct PerturbationParams {
  MechanismKind mechanism = MechanismKind::kLaplace;
  double epsilon_sampling = 0.0;
  double sampling_sensitivity = 1.0;
  double noise_scale = 0.0;
};

// Diagnostic-only overrides; the private path always passes none.
struct PerturbationOverrides {
  std::optional<std::size_t> neuron;
  std::optional<double> noise;
};

struct PerturbationOutcome {
  std::size_t neuron = 0;
  double noise = 0.0;
  std::vector<double> noisy_logits;
  std::vector<double> probabilities;
};

absl::StatusOr<PerturbationOutcome> PerturbLogits(
    std::span<const double> logits, const PerturbationParams& params,
    RandomStream& rng, const PerturbationOverrides& overrides = {});

}  // namespace dpnn::internal

#endif  // DPNN_SRC_DP_PREDICT_INTERNAL_H_
