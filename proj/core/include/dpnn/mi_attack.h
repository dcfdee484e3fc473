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

#ifndef DPNN_MI_ATTACK_H_
#define DPNN_MI_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/dataset.h"
#include "dpnn/trainer.h"

namespace dpnn {

// Black-box membership inference with shadow models: k shadow networks
// mimic the target on disjoint data, their outputs on their own training
// rows (members) and held-out rows (non-members) train one binary attack
// classifier per class label.
struct AttackConfig {
  std::size_t shadow_count = 10;
  // Training rows per shadow model (the same number of held-out rows is
  // drawn for each). 0 splits the pool evenly.
  std::size_t shadow_train_rows = 0;
  // Hidden widths of the shadow networks; input and output widths come
  // from the data.
  std::vector<int> shadow_hidden_widths = {128};
  TrainingConfig shadow_training;
  int attack_hidden_width = 64;
  TrainingConfig attack_training = DefaultAttackTraining();
  uint64_t seed = 0;

  static TrainingConfig DefaultAttackTraining();
  absl::Status Validate() const;
};

// Attack features are the prediction vector sorted in decreasing order;
// the true class label routes a row to its per-class classifier.
struct AttackCorpus {
  int class_count = 0;
  std::vector<double> vectors;  // rows x class_count
  std::vector<int> labels;
  std::vector<int> member;  // 1 member, 0 non-member

  std::size_t rows() const { return labels.size(); }
  std::span<const double> Row(std::size_t i) const {
    return {vectors.data() + i * class_count,
            static_cast<std::size_t>(class_count)};
  }
  // Sorts `prediction` before storing it.
  void Append(std::span<const double> prediction, int label, bool is_member);
};

// Trains `shadow_count` shadows on disjoint slices of `pool`. Fails if the
// pool is too small or shares a row id with `target_training_ids`.
absl::StatusOr<AttackCorpus> BuildShadowCorpus(
    const LabeledDataset& pool, std::span<const int64_t> target_training_ids,
    const AttackConfig& config);

class AttackModels {
 public:
  int class_count() const { return static_cast<int>(per_class_.size()); }
  // Classes that had no corpus rows; their queries are judged non-members.
  const std::vector<int>& skipped_classes() const { return skipped_; }
  const std::optional<TrainedModel>& model(int label) const {
    return per_class_[label];
  }

  absl::StatusOr<bool> PredictMember(std::span<const double> prediction,
                                     int label) const;

 private:
  friend absl::StatusOr<AttackModels> TrainAttackModels(
      const AttackCorpus& corpus, const AttackConfig& config);

  std::vector<std::optional<TrainedModel>> per_class_;
  std::vector<int> skipped_;
};

absl::StatusOr<AttackModels> TrainAttackModels(const AttackCorpus& corpus,
                                               const AttackConfig& config);

// Fraction of corpus rows whose membership the models guess correctly.
absl::StatusOr<double> AttackAccuracy(const AttackModels& models,
                                      const AttackCorpus& corpus);

struct AttackResult {
  double true_positive_rate = 0.0;
  double false_positive_rate = 0.0;
  // TPR - FPR, unclamped.
  double privacy_leakage = 0.0;
  double attack_accuracy = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;

  double ClampedLeakage() const;
};

AttackResult ComputeAttackResult(std::size_t true_positives,
                                 std::size_t positives,
                                 std::size_t false_positives,
                                 std::size_t negatives);

struct AttackVerdict {
  bool member = false;
  int label = 0;
  bool predicted_member = false;
};

struct AttackEvaluation {
  AttackResult result;
  std::vector<AttackVerdict> verdicts;  // members first, then non-members
};

// Prediction vector released by the target for one feature row.
using QueryFn =
    std::function<absl::StatusOr<std::vector<double>>(std::span<const double>)>;

// Queries the target once per row of `members` then `non_members` (which
// must have equal size) and scores the attack. Query errors, including
// budget refusals, propagate unchanged.
absl::StatusOr<AttackEvaluation> EvaluateLeakage(
    const QueryFn& target, const LabeledDataset& members,
    const LabeledDataset& non_members, const AttackModels& models);

// 1 - dp_accuracy / baseline_accuracy.
absl::StatusOr<double> AccuracyLoss(double dp_test_accuracy,
                                    double baseline_test_accuracy);

}  // namespace dpnn

#endif  // DPNN_MI_ATTACK_H_
