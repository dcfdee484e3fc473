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

#include "dpnn/dp_predict_diagnostic.h"

#include "dp_predict_internal.h"

namespace dpnn::diagnostic {

absl::StatusOr<DiagnosticPrediction> PredictWithTrace(
    const NetworkTopology& topology, const ModelParams& params,
    const SensitivityReport& report, const PrivacyBudget& budget,
    std::span<const double> x, RandomStream& rng,
    const DiagnosticOptions& options) {
  auto trace = Forward(topology, params, x);
  if (!trace.ok()) return trace.status();
  if (!(budget.epsilon_neuron > 0.0)) {
    return absl::InvalidArgumentError("epsilon_neuron must be positive");
  }
  internal::PerturbationParams perturbation{
      budget.mechanism, budget.epsilon_sampling, report.delta_p,
      options.noise_scale.value_or(report.delta_z / budget.epsilon_neuron)};
  auto outcome = internal::PerturbLogits(
      trace->logits, perturbation, rng,
      {options.forced_neuron, options.forced_noise});
  if (!outcome.ok()) return outcome.status();
  DiagnosticPrediction out;
  out.clean_logits = trace->logits;
  out.clean_probabilities = trace->probabilities;
  out.noisy_logits = std::move(outcome->noisy_logits);
  out.probabilities = std::move(outcome->probabilities);
  out.sampled_neuron = outcome->neuron;
  out.noise = outcome->noise;
  return out;
}

}  // namespace dpnn::diagnostic
