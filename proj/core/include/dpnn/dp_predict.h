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

#ifndef DPNN_DP_PREDICT_H_
#define DPNN_DP_PREDICT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/budget.h"
#include "dpnn/dataset.h"
#include "dpnn/network.h"
#include "dpnn/random.h"
#include "dpnn/sensitivity.h"

namespace dpnn {

// Which sensitivity scales the exponential mechanism's exponent. The
// prediction procedure uses delta_p; kExpDeltaP (exp(delta_p)) is kept for
// experiments with the alternative reading of the privacy proof.
enum class SamplingSensitivity { kDeltaP, kExpDeltaP };

struct DpPredictorOptions {
  SamplingSensitivity sampling_sensitivity = SamplingSensitivity::kDeltaP;
};

struct DpPrediction {
  std::vector<double> probabilities;
  std::size_t sampled_neuron = 0;
  double epsilon_consumed = 0.0;
};

struct DpBatchResult {
  std::vector<DpPrediction> predictions;
  // Set when the ledger ran out (or a numeric failure stopped the batch)
  // before every sample was answered. `predictions` holds the answered
  // prefix.
  std::optional<absl::Status> refusal;
};

// Differentially private prediction vectors from a trained model.
//
// Per query: forward to the output logits z_T, take p = softmax(z_T),
// sample one output neuron v with the exponential mechanism over p
// (epsilon_sampling, sensitivity delta_p), add one draw of
// Dist(0, delta_z / epsilon_neuron) to z_T[v] only, and release
// softmax of the perturbed logits. The clean p never leaves this class.
//
// The model, report and ledger must outlive the predictor. Predict is
// const and may be called concurrently with distinct RandomStreams; the
// ledger serialises the budget charge.
class DpPredictor {
 public:
  static absl::StatusOr<DpPredictor> Create(const NetworkTopology& topology,
                                            const ModelParams& params,
                                            const SensitivityReport& report,
                                            BudgetLedger* ledger,
                                            DpPredictorOptions options = {});

  // Charges the ledger exactly once on success. Non-finite logits fail with
  // InternalError before anything is charged; an exhausted ledger fails
  // with ResourceExhausted.
  absl::StatusOr<DpPrediction> Predict(std::span<const double> x,
                                       RandomStream& rng) const;

  // Sequential Predict over every row, one advancing stream.
  DpBatchResult PredictBatch(const LabeledDataset& samples,
                             RandomStream& rng) const;

  double noise_scale() const { return noise_scale_; }
  double sampling_sensitivity() const { return sampling_sensitivity_; }
  const PrivacyBudget& budget() const { return ledger_->budget(); }

 private:
  DpPredictor(const NetworkTopology* topology, const ModelParams* params,
              BudgetLedger* ledger, double noise_scale,
              double sampling_sensitivity)
      : topology_(topology),
        params_(params),
        ledger_(ledger),
        noise_scale_(noise_scale),
        sampling_sensitivity_(sampling_sensitivity) {}

  const NetworkTopology* topology_;
  const ModelParams* params_;
  BudgetLedger* ledger_;
  double noise_scale_;
  double sampling_sensitivity_;
};

}  // namespace dpnn

#endif  // DPNN_DP_PREDICT_H_
