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

#include "dpnn/mi_attack.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "dpnn/random.h"

namespace dpnn {
namespace {

std::vector<int> ShadowWidths(const LabeledDataset& data,
                              const std::vector<int>& hidden) {
  std::vector<int> widths = {static_cast<int>(data.feature_count)};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(data.class_count);
  return widths;
}

}  // namespace

TrainingConfig AttackConfig::DefaultAttackTraining() {
  TrainingConfig config;
  config.learning_rate = 0.01;
  config.l2_coefficient = 1e-6;
  config.loss_kind = LossKind::kCrossEntropy;
  return config;
}

absl::Status AttackConfig::Validate() const {
  if (shadow_count < 1) {
    return absl::InvalidArgumentError("need at least one shadow model");
  }
  if (attack_hidden_width < 1) {
    return absl::InvalidArgumentError("attack hidden width must be positive");
  }
  if (auto s = shadow_training.Validate(); !s.ok()) return s;
  return attack_training.Validate();
}

void AttackCorpus::Append(std::span<const double> prediction, int label,
                          bool is_member) {
  const std::size_t begin = vectors.size();
  vectors.insert(vectors.end(), prediction.begin(), prediction.end());
  std::sort(vectors.begin() + begin, vectors.end(), std::greater<double>());
  labels.push_back(label);
  member.push_back(is_member ? 1 : 0);
}

absl::StatusOr<AttackCorpus> BuildShadowCorpus(
    const LabeledDataset& pool, std::span<const int64_t> target_training_ids,
    const AttackConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (auto s = pool.Validate(); !s.ok()) return s;
  const std::size_t k = config.shadow_count;
  const std::size_t per_shadow = config.shadow_train_rows > 0
                                     ? config.shadow_train_rows
                                     : pool.rows() / (2 * k);
  const std::size_t required = 2 * k * std::max<std::size_t>(per_shadow, 1);
  if (per_shadow == 0 || pool.rows() < required) {
    return absl::FailedPreconditionError(
        absl::StrCat("shadow pool has ", pool.rows(), " rows; ", k,
                     " disjoint train/test shadow splits need at least ",
                     required));
  }
  const std::unordered_set<int64_t> excluded(target_training_ids.begin(),
                                             target_training_ids.end());
  for (std::size_t i = 0; i < pool.rows(); ++i) {
    const int64_t id = pool.row_ids.empty() ? static_cast<int64_t>(i)
                                            : pool.row_ids[i];
    if (excluded.contains(id)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "shadow pool row id ", id, " is in the target training set"));
    }
  }
  auto topology =
      NetworkTopology::Create(ShadowWidths(pool, config.shadow_hidden_widths));
  if (!topology.ok()) return topology.status();

  std::vector<std::size_t> order(pool.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream rng(DeriveSeed(config.seed, 0, "shadow-pool"));
  Shuffle(order.begin(), order.end(), rng);

  AttackCorpus corpus;
  corpus.class_count = pool.class_count;
  const std::span<const std::size_t> all(order);
  for (std::size_t s = 0; s < k; ++s) {
    const LabeledDataset train =
        pool.Subset(all.subspan(2 * s * per_shadow, per_shadow));
    const LabeledDataset held_out =
        pool.Subset(all.subspan((2 * s + 1) * per_shadow, per_shadow));
    TrainingConfig shadow_config = config.shadow_training;
    shadow_config.seed = DeriveSeed(config.seed, s, "shadow-model");
    auto shadow = Train(train, nullptr, *topology, shadow_config);
    if (!shadow.ok()) {
      return absl::Status(shadow.status().code(),
                          absl::StrCat("shadow model ", s, ": ",
                                       shadow.status().message()));
    }
    for (const auto* part : {&train, &held_out}) {
      const bool is_member = part == &train;
      for (std::size_t i = 0; i < part->rows(); ++i) {
        auto trace = Forward(shadow->topology, shadow->params, part->Row(i));
        if (!trace.ok()) return trace.status();
        corpus.Append(trace->probabilities, part->labels[i], is_member);
      }
    }
  }
  return corpus;
}

absl::StatusOr<AttackModels> TrainAttackModels(const AttackCorpus& corpus,
                                               const AttackConfig& config) {
  if (auto s = config.attack_training.Validate(); !s.ok()) return s;
  if (corpus.class_count < 2) {
    return absl::InvalidArgumentError("attack corpus needs >= 2 classes");
  }
  if (corpus.rows() == 0) {
    return absl::InvalidArgumentError("attack corpus is empty");
  }
  auto topology = NetworkTopology::Create(
      {corpus.class_count, config.attack_hidden_width, 2});
  if (!topology.ok()) return topology.status();

  AttackModels models;
  models.per_class_.resize(corpus.class_count);
  for (int label = 0; label < corpus.class_count; ++label) {
    LabeledDataset rows;
    rows.name = absl::StrCat("attack-class-", label);
    rows.feature_count = static_cast<std::size_t>(corpus.class_count);
    rows.class_count = 2;
    for (std::size_t i = 0; i < corpus.rows(); ++i) {
      if (corpus.labels[i] != label) continue;
      const auto v = corpus.Row(i);
      rows.features.insert(rows.features.end(), v.begin(), v.end());
      rows.labels.push_back(corpus.member[i]);
      rows.row_ids.push_back(static_cast<int64_t>(i));
    }
    if (rows.rows() == 0) {
      models.skipped_.push_back(label);
      continue;
    }
    TrainingConfig attack_config = config.attack_training;
    attack_config.seed = DeriveSeed(config.seed, label, "attack-model");
    auto model = Train(rows, nullptr, *topology, attack_config);
    if (!model.ok()) {
      return absl::Status(model.status().code(),
                          absl::StrCat("attack model for class ", label, ": ",
                                       model.status().message()));
    }
    models.per_class_[label] = std::move(*model);
  }
  return models;
}

absl::StatusOr<bool> AttackModels::PredictMember(
    std::span<const double> prediction, int label) const {
  if (label < 0 || label >= class_count()) {
    return absl::OutOfRangeError(absl::StrCat("label ", label,
                                              " has no attack model slot"));
  }
  if (prediction.size() != static_cast<std::size_t>(class_count())) {
    return absl::InvalidArgumentError(
        absl::StrCat("prediction vector has ", prediction.size(),
                     " entries, expected ", class_count()));
  }
  const auto& model = per_class_[label];
  if (!model) return false;
  std::vector<double> sorted(prediction.begin(), prediction.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  auto trace = Forward(model->topology, model->params, sorted);
  if (!trace.ok()) return trace.status();
  return Argmax(trace->probabilities) == 1;
}

absl::StatusOr<double> AttackAccuracy(const AttackModels& models,
                                      const AttackCorpus& corpus) {
  if (corpus.rows() == 0) return absl::InvalidArgumentError("empty corpus");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < corpus.rows(); ++i) {
    auto guess = models.PredictMember(corpus.Row(i), corpus.labels[i]);
    if (!guess.ok()) return guess.status();
    if (*guess == (corpus.member[i] == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.rows());
}

double AttackResult::ClampedLeakage() const {
  return std::clamp(privacy_leakage, 0.0, 1.0);
}

AttackResult ComputeAttackResult(std::size_t true_positives,
                                 std::size_t positives,
                                 std::size_t false_positives,
                                 std::size_t negatives) {
  AttackResult r;
  r.positives = positives;
  r.negatives = negatives;
  r.true_positive_rate =
      positives > 0 ? static_cast<double>(true_positives) / positives : 0.0;
  r.false_positive_rate =
      negatives > 0 ? static_cast<double>(false_positives) / negatives : 0.0;
  r.privacy_leakage = r.true_positive_rate - r.false_positive_rate;
  const std::size_t total = positives + negatives;
  r.attack_accuracy =
      total > 0 ? static_cast<double>(true_positives +
                                      (negatives - false_positives)) /
                      static_cast<double>(total)
                : 0.0;
  return r;
}

absl::StatusOr<AttackEvaluation> EvaluateLeakage(
    const QueryFn& target, const LabeledDataset& members,
    const LabeledDataset& non_members, const AttackModels& models) {
  if (members.rows() != non_members.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("member and non-member sets must be the same size (",
                     members.rows(), " vs ", non_members.rows(), ")"));
  }
  if (members.rows() == 0) {
    return absl::InvalidArgumentError("no evaluation samples");
  }
  AttackEvaluation eval;
  eval.verdicts.reserve(2 * members.rows());
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto* part : {&members, &non_members}) {
    const bool is_member = part == &members;
    for (std::size_t i = 0; i < part->rows(); ++i) {
      auto prediction = target(part->Row(i));
      if (!prediction.ok()) return prediction.status();
      auto guess = models.PredictMember(*prediction, part->labels[i]);
      if (!guess.ok()) return guess.status();
      if (*guess && is_member) ++tp;
      if (*guess && !is_member) ++fp;
      eval.verdicts.push_back({is_member, part->labels[i], *guess});
    }
  }
  eval.result = ComputeAttackResult(tp, members.rows(), fp, non_members.rows());
  return eval;
}

absl::StatusOr<double> AccuracyLoss(double dp_test_accuracy,
                                    double baseline_test_accuracy) {
  if (!(baseline_test_accuracy > 0.0)) {
    return absl::InvalidArgumentError(
        "baseline test accuracy must be positive");
  }
  return 1.0 - dp_test_accuracy / baseline_test_accuracy;
}

}  // namespace dpnn
