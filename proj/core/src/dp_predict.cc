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

#include "dpnn/dp_predict.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "dp_predict_internal.h"

namespace dpnn {
namespace internal {

absl::StatusOr<PerturbationOutcome> PerturbLogits(
    std::span<const double> logits, const PerturbationParams& params,
    RandomStream& rng, const PerturbationOverrides& overrides) {
  const std::vector<double> clean = Softmax(logits);
  PerturbationOutcome out;
  if (overrides.neuron) {
    if (*overrides.neuron >= logits.size()) {
      return absl::OutOfRangeError("forced neuron index out of range");
    }
    out.neuron = *overrides.neuron;
  } else {
    auto neuron = ExponentialMechanismSample(
        clean, params.sampling_sensitivity, params.epsilon_sampling, rng);
    if (!neuron.ok()) return neuron.status();
    out.neuron = *neuron;
  }
  if (overrides.noise) {
    out.noise = *overrides.noise;
  } else if (params.noise_scale > 0.0) {
    out.noise = SampleNoise(params.mechanism, params.noise_scale, rng);
  }
  out.noisy_logits.assign(logits.begin(), logits.end());
  out.noisy_logits[out.neuron] += out.noise;
  if (!std::isfinite(out.noisy_logits[out.neuron])) {
    return absl::InternalError("perturbed logit is not finite");
  }
  out.probabilities = Softmax(out.noisy_logits);
  // Large noise can underflow entries to 0 (and push one to exactly 1).
  // Lifting them to the floor and renormalising is post-processing.
  bool floored = false;
  for (double& p : out.probabilities) {
    if (p < kProbabilityFloor) {
      p = kProbabilityFloor;
      floored = true;
    }
  }
  if (floored) {
    double total = 0.0;
    for (double p : out.probabilities) total += p;
    for (double& p : out.probabilities) p /= total;
  }
  return out;
}

}  // namespace internal

absl::StatusOr<DpPredictor> DpPredictor::Create(
    const NetworkTopology& topology, const ModelParams& params,
    const SensitivityReport& report, BudgetLedger* ledger,
    DpPredictorOptions options) {
  if (ledger == nullptr) {
    return absl::InvalidArgumentError("a budget ledger is required");
  }
  if (params.weights.size() != topology.weight_count()) {
    return absl::InvalidArgumentError("model does not match its topology");
  }
  if (report.degenerate || !(report.delta_z > 0.0)) {
    return absl::FailedPreconditionError(
        "sensitivity report is degenerate (delta_z = 0)");
  }
  if (!(report.delta_p > 0.0) || report.delta_p > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta_p must lie in (0, 1], got ", report.delta_p));
  }
  const PrivacyBudget& budget = ledger->budget();
  if (budget.class_count != topology.class_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget was split for ", budget.class_count,
                     " classes, model has ", topology.class_count()));
  }
  if (!(budget.epsilon_neuron > 0.0)) {
    return absl::InvalidArgumentError("epsilon_neuron must be positive");
  }
  const double sampling_sensitivity =
      options.sampling_sensitivity == SamplingSensitivity::kDeltaP
          ? report.delta_p
          : std::exp(report.delta_p);
  return DpPredictor(&topology, &params, ledger,
                     report.delta_z / budget.epsilon_neuron,
                     sampling_sensitivity);
}

absl::StatusOr<DpPrediction> DpPredictor::Predict(std::span<const double> x,
                                                  RandomStream& rng) const {
  auto trace = Forward(*topology_, *params_, x);
  if (!trace.ok()) return trace.status();
  for (double z : trace->logits) {
    if (!std::isfinite(z)) {
      return absl::InternalError("non-finite output logits; query refused");
    }
  }
  if (auto s = ledger_->Charge(); !s.ok()) return s;

  const PrivacyBudget& budget = ledger_->budget();
  internal::PerturbationParams params{budget.mechanism,
                                      budget.epsilon_sampling,
                                      sampling_sensitivity_, noise_scale_};
  auto outcome = internal::PerturbLogits(trace->logits, params, rng);
  if (!outcome.ok()) return outcome.status();
  return DpPrediction{std::move(outcome->probabilities), outcome->neuron,
                      budget.epsilon_per_query};
}

DpBatchResult DpPredictor::PredictBatch(const LabeledDataset& samples,
                                        RandomStream& rng) const {
  DpBatchResult result;
  result.predictions.reserve(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    auto prediction = Predict(samples.Row(i), rng);
    if (!prediction.ok()) {
      result.refusal = absl::Status(
          prediction.status().code(),
          absl::StrCat("sample ", i, ": ", prediction.status().message()));
      break;
    }
    result.predictions.push_back(std::move(*prediction));
  }
  return result;
}

}  // namespace dpnn
