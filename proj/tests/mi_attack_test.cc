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
#include <cmath>
#include <numeric>
#include <set>

#include "dpnn/dp_predict.h"
#include "dpnn/sensitivity.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dpnn {
namespace {

AttackConfig SmallAttackConfig(std::size_t shadows, uint64_t seed) {
  AttackConfig config;
  config.shadow_count = shadows;
  config.shadow_hidden_widths = {8};
  config.shadow_training.learning_rate = 0.01;
  config.shadow_training.batch_size = 50;
  config.shadow_training.epochs = 5;
  config.attack_hidden_width = 16;
  config.attack_training.epochs = 30;
  config.seed = seed;
  return config;
}

TEST(AttackConfigTest, DefaultsAndValidation) {
  AttackConfig config;
  EXPECT_EQ(config.attack_hidden_width, 64);
  EXPECT_EQ(config.attack_training.learning_rate, 0.01);
  EXPECT_EQ(config.attack_training.l2_coefficient, 1e-6);
  EXPECT_EQ(config.attack_training.loss_kind, LossKind::kCrossEntropy);
  EXPECT_TRUE(config.Validate().ok());
  config.shadow_count = 0;
  EXPECT_FALSE(config.Validate().ok());
}

TEST(ShadowCorpusTest, CountsRowsAndMembers) {
  auto pool = MakeSynthetic({.classes = 3, .rows = 400, .features = 4,
                             .separation = 2.0, .seed = 1});
  ASSERT_TRUE(pool.ok());
  AttackConfig config = SmallAttackConfig(2, 7);
  config.shadow_train_rows = 100;
  auto corpus = BuildShadowCorpus(*pool, {}, config);
  ASSERT_TRUE(corpus.ok()) << corpus.status();
  EXPECT_EQ(corpus->rows(), 400u);
  EXPECT_EQ(std::count(corpus->member.begin(), corpus->member.end(), 1), 200);
  for (std::size_t i = 0; i < corpus->rows(); ++i) {
    const auto v = corpus->Row(i);
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end(), std::greater<double>()));
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(ShadowCorpusTest, DeterministicForFixedSeed) {
  auto pool = MakeSynthetic({.classes = 3, .rows = 200, .features = 4,
                             .separation = 2.0, .seed = 2});
  ASSERT_TRUE(pool.ok());
  auto a = BuildShadowCorpus(*pool, {}, SmallAttackConfig(2, 3));
  auto b = BuildShadowCorpus(*pool, {}, SmallAttackConfig(2, 3));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->vectors, b->vectors);
  EXPECT_EQ(a->member, b->member);
  auto c = BuildShadowCorpus(*pool, {}, SmallAttackConfig(2, 4));
  ASSERT_TRUE(c.ok());
  EXPECT_NE(a->vectors, c->vectors);
}

TEST(ShadowCorpusTest, RejectsOverlapWithTargetTrainingSet) {
  auto data = MakeSynthetic({.classes = 2, .rows = 300, .features = 3,
                             .separation = 1.0, .seed = 5});
  ASSERT_TRUE(data.ok());
  auto split = SplitDataset(*data, 50, 50, 6);
  ASSERT_TRUE(split.ok());
  // The split's remainder is disjoint from the target training rows.
  EXPECT_TRUE(BuildShadowCorpus(split->rest, split->train.row_ids,
                                SmallAttackConfig(2, 1))
                  .ok());
  std::set<int64_t> train_ids(split->train.row_ids.begin(),
                              split->train.row_ids.end());
  for (int64_t id : split->rest.row_ids) EXPECT_FALSE(train_ids.contains(id));

  auto overlap = BuildShadowCorpus(*data, split->train.row_ids,
                                   SmallAttackConfig(2, 1));
  EXPECT_EQ(overlap.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(ShadowCorpusTest, SmallPoolNamesRequiredSize) {
  auto pool = MakeSynthetic({.classes = 2, .rows = 30, .features = 3,
                             .separation = 1.0, .seed = 5});
  ASSERT_TRUE(pool.ok());
  AttackConfig config = SmallAttackConfig(4, 1);
  config.shadow_train_rows = 10;
  auto corpus = BuildShadowCorpus(*pool, {}, config);
  EXPECT_EQ(corpus.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(corpus.status().message().find("80"), absl::string_view::npos)
      << corpus.status();
}

// Members put all mass on the top entry; non-members are uniform.
AttackCorpus SeparableCorpus(int classes, std::size_t per_class,
                             RandomStream& rng) {
  AttackCorpus corpus;
  corpus.class_count = classes;
  for (int label = 0; label < classes; ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> v(classes, 0.0);
      const bool member = i % 2 == 0;
      if (member) {
        v[rng.UniformIndex(classes)] = 1.0;
      } else {
        std::fill(v.begin(), v.end(), 1.0 / classes);
      }
      corpus.Append(v, label, member);
    }
  }
  return corpus;
}

// Member and non-member vectors come from the same Dirichlet-like law.
AttackCorpus NoSignalCorpus(int classes, std::size_t per_class,
                            RandomStream& rng) {
  AttackCorpus corpus;
  corpus.class_count = classes;
  for (int label = 0; label < classes; ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> v(classes);
      double total = 0.0;
      for (double& x : v) {
        x = -std::log(rng.UniformOpen());
        total += x;
      }
      for (double& x : v) x /= total;
      corpus.Append(v, label, rng.Uniform() < 0.5);
    }
  }
  return corpus;
}

TEST(AttackModelTest, SeparableCorpusIsLearned) {
  RandomStream rng(10);
  const AttackCorpus train = SeparableCorpus(3, 200, rng);
  const AttackCorpus held_out = SeparableCorpus(3, 100, rng);
  auto models = TrainAttackModels(train, SmallAttackConfig(1, 11));
  ASSERT_TRUE(models.ok()) << models.status();
  EXPECT_TRUE(models->skipped_classes().empty());
  auto accuracy = AttackAccuracy(*models, held_out);
  ASSERT_TRUE(accuracy.ok());
  EXPECT_GE(*accuracy, 0.95);
}

TEST(AttackModelTest, NoSignalCorpusIsCoinFlip) {
  RandomStream rng(12);
  const AttackCorpus train = NoSignalCorpus(2, 500, rng);
  const AttackCorpus held_out = NoSignalCorpus(2, 1000, rng);
  auto models = TrainAttackModels(train, SmallAttackConfig(1, 13));
  ASSERT_TRUE(models.ok());
  auto accuracy = AttackAccuracy(*models, held_out);
  ASSERT_TRUE(accuracy.ok());
  EXPECT_NEAR(*accuracy, 0.5, 3.0 * std::sqrt(0.25 / held_out.rows()));
}

TEST(AttackModelTest, BalancedCorpusGivesBothVerdicts) {
  RandomStream rng(14);
  const AttackCorpus train = SeparableCorpus(2, 100, rng);
  const AttackCorpus held_out = SeparableCorpus(2, 50, rng);
  auto models = TrainAttackModels(train, SmallAttackConfig(1, 15));
  ASSERT_TRUE(models.ok());
  std::set<bool> verdicts;
  for (std::size_t i = 0; i < held_out.rows(); ++i) {
    verdicts.insert(
        *models->PredictMember(held_out.Row(i), held_out.labels[i]));
  }
  EXPECT_EQ(verdicts.size(), 2u);
}

TEST(AttackModelTest, EmptyClassIsSkipped) {
  RandomStream rng(16);
  const AttackCorpus corpus = SeparableCorpus(2, 50, rng);
  // Three classes, but no rows labelled 2.
  AttackCorpus padded;
  padded.class_count = 3;
  for (std::size_t i = 0; i < corpus.rows(); ++i) {
    const auto v = corpus.Row(i);
    padded.Append(std::vector<double>{v[0], v[1], 0.0}, corpus.labels[i],
                  corpus.member[i] == 1);
  }
  auto models = TrainAttackModels(padded, SmallAttackConfig(1, 17));
  ASSERT_TRUE(models.ok());
  EXPECT_EQ(models->skipped_classes(), std::vector<int>{2});
  auto verdict = models->PredictMember(std::vector<double>{1.0, 0.0, 0.0}, 2);
  ASSERT_TRUE(verdict.ok());
  EXPECT_FALSE(*verdict);
}

TEST(AttackResultTest, LeakageArithmetic) {
  const AttackResult r = ComputeAttackResult(50, 100, 10, 100);
  EXPECT_DOUBLE_EQ(r.true_positive_rate, 0.5);
  EXPECT_DOUBLE_EQ(r.false_positive_rate, 0.1);
  EXPECT_DOUBLE_EQ(r.privacy_leakage, 0.4);
  EXPECT_DOUBLE_EQ(r.attack_accuracy, 0.7);
  EXPECT_DOUBLE_EQ(ComputeAttackResult(100, 100, 0, 100).privacy_leakage, 1.0);
  EXPECT_DOUBLE_EQ(ComputeAttackResult(50, 100, 50, 100).privacy_leakage, 0.0);
  const AttackResult negative = ComputeAttackResult(10, 100, 30, 100);
  EXPECT_DOUBLE_EQ(negative.privacy_leakage, -0.2);
  EXPECT_EQ(negative.ClampedLeakage(), 0.0);
}

TEST(AccuracyLossTest, Examples) {
  EXPECT_EQ(*AccuracyLoss(0.6484, 0.6484), 0.0);
  EXPECT_DOUBLE_EQ(*AccuracyLoss(0.3242, 0.6484), 0.5);
  EXPECT_NEAR(*AccuracyLoss(0.5, 0.6484), 0.228871067242442936, 1e-15);
  EXPECT_FALSE(AccuracyLoss(0.5, 0.0).ok());
}

// One target/attack scenario on synthetic data.
struct Scenario {
  DatasetSplit split;
  TrainedModel target;
  AttackModels attack;
};

struct ScenarioSpec {
  int classes = 10;
  std::size_t n = 200;
  std::size_t features = 20;
  double separation = 0.5;
  int hidden = 64;
  int epochs = 60;
  std::size_t shadows = 2;
  uint64_t seed = 0;
};

absl::StatusOr<Scenario> BuildScenario(const ScenarioSpec& spec) {
  auto data = MakeSynthetic({.classes = spec.classes,
                             .rows = 2 * spec.n * (spec.shadows + 1),
                             .features = spec.features,
                             .separation = spec.separation,
                             .seed = DeriveSeed(spec.seed, 0, "data")});
  if (!data.ok()) return data.status();
  auto split = SplitDataset(*data, spec.n, spec.n,
                            DeriveSeed(spec.seed, 0, "split"));
  if (!split.ok()) return split.status();
  auto topology = NetworkTopology::Create(
      {static_cast<int>(spec.features), spec.hidden, spec.classes});
  if (!topology.ok()) return topology.status();
  TrainingConfig training;
  training.learning_rate = 0.01;
  training.batch_size = 50;
  training.epochs = spec.epochs;
  training.loss_kind = LossKind::kConvexifiedCrossEntropy;
  training.seed = DeriveSeed(spec.seed, 0, "target");
  auto target = Train(split->train, &split->test, *topology, training);
  if (!target.ok()) return target.status();

  AttackConfig attack;
  attack.shadow_count = spec.shadows;
  attack.shadow_train_rows = spec.n;
  attack.shadow_hidden_widths = {spec.hidden};
  attack.shadow_training = training;
  attack.attack_training.epochs = 50;
  attack.seed = DeriveSeed(spec.seed, 0, "attack");
  auto corpus = BuildShadowCorpus(split->rest, split->train.row_ids, attack);
  if (!corpus.ok()) return corpus.status();
  auto models = TrainAttackModels(*corpus, attack);
  if (!models.ok()) return models.status();
  return Scenario{std::move(*split), std::move(*target), std::move(*models)};
}

QueryFn CleanTarget(const TrainedModel& model) {
  return [&model](std::span<const double> x)
             -> absl::StatusOr<std::vector<double>> {
    auto trace = Forward(model.topology, model.params, x);
    if (!trace.ok()) return trace.status();
    return trace->probabilities;
  };
}

double Leakage(const Scenario& s, const QueryFn& target) {
  auto eval = EvaluateLeakage(target, s.split.train, s.split.test, s.attack);
  EXPECT_TRUE(eval.ok()) << eval.status();
  return eval.ok() ? eval->result.privacy_leakage : 0.0;
}

TEST(EvaluateLeakageTest, RequiresBalancedSets) {
  RandomStream rng(20);
  auto models = TrainAttackModels(SeparableCorpus(2, 20, rng),
                                  SmallAttackConfig(1, 1));
  ASSERT_TRUE(models.ok());
  const LabeledDataset a = testing::RandomDataset(3, 2, 2, rng);
  const LabeledDataset b = testing::RandomDataset(4, 2, 2, rng);
  QueryFn uniform = [](std::span<const double>)
      -> absl::StatusOr<std::vector<double>> {
    return std::vector<double>{0.5, 0.5};
  };
  EXPECT_EQ(EvaluateLeakage(uniform, a, b, *models).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(EvaluateLeakageTest, UniformTargetLeaksNothing) {
  auto scenario = BuildScenario({.classes = 5, .n = 150, .epochs = 40,
                                 .seed = 21});
  ASSERT_TRUE(scenario.ok()) << scenario.status();
  QueryFn uniform = [](std::span<const double>)
      -> absl::StatusOr<std::vector<double>> {
    return std::vector<double>(5, 0.2);
  };
  const double leakage = Leakage(*scenario, uniform);
  EXPECT_NEAR(leakage, 0.0, 3.0 * std::sqrt(2.0 * 0.25 / 150));
}

TEST(EvaluateLeakageTest, InvariantUnderSampleOrder) {
  auto scenario = BuildScenario({.classes = 5, .n = 150, .epochs = 40,
                                 .seed = 22});
  ASSERT_TRUE(scenario.ok());
  const double original = Leakage(*scenario, CleanTarget(scenario->target));
  std::vector<std::size_t> order = testing::AllRows(scenario->split.train);
  std::reverse(order.begin(), order.end());
  RandomStream rng(23);
  Shuffle(order.begin(), order.end(), rng);
  Scenario permuted{{scenario->split.train.Subset(order),
                     scenario->split.test.Subset(order),
                     {}},
                    scenario->target,
                    scenario->attack};
  EXPECT_EQ(Leakage(permuted, CleanTarget(scenario->target)), original);
}

TEST(EvaluateLeakageTest, PropagatesBudgetRefusal) {
  auto scenario = BuildScenario({.classes = 5, .n = 150, .epochs = 10,
                                 .seed = 24});
  ASSERT_TRUE(scenario.ok());
  const TrainedModel& target = scenario->target;
  auto report = ReportForModel(target.topology, target.report.layer_maxima,
                               150, 0.001);
  ASSERT_TRUE(report.ok());
  BudgetLedger ledger(*PrivacyBudget::ForPerQuery(
      1.0, 10, 5, MechanismKind::kGaussian, 150));
  auto predictor =
      DpPredictor::Create(target.topology, target.params, *report, &ledger);
  ASSERT_TRUE(predictor.ok());
  RandomStream rng(25);
  QueryFn dp = [&](std::span<const double> x)
      -> absl::StatusOr<std::vector<double>> {
    auto out = predictor->Predict(x, rng);
    if (!out.ok()) return out.status();
    return out->probabilities;
  };
  auto eval = EvaluateLeakage(dp, scenario->split.train, scenario->split.test,
                              scenario->attack);
  EXPECT_EQ(eval.status().code(), absl::StatusCode::kResourceExhausted);
}

TEST(LeakageDirectionTest, OverfitTargetLeaksMoreThanWellFitTarget) {
  auto overfit = BuildScenario({.classes = 30, .n = 300, .features = 30,
                                .separation = 0.4, .hidden = 64,
                                .epochs = 100, .seed = 30});
  ASSERT_TRUE(overfit.ok()) << overfit.status();
  auto well_fit = BuildScenario({.classes = 2, .n = 300, .features = 10,
                                 .separation = 3.0, .hidden = 16,
                                 .epochs = 30, .seed = 31});
  ASSERT_TRUE(well_fit.ok()) << well_fit.status();
  const double overfit_leakage =
      Leakage(*overfit, CleanTarget(overfit->target));
  const double well_fit_leakage =
      Leakage(*well_fit, CleanTarget(well_fit->target));
  EXPECT_GT(overfit_leakage, 0.1);
  EXPECT_NEAR(well_fit_leakage, 0.0, 0.05);
  EXPECT_GT(overfit_leakage, well_fit_leakage);
}

TEST(LeakageDirectionTest, DpTargetLeaksNoMoreThanBaseline) {
  double baseline_total = 0.0;
  double dp_total = 0.0;
  constexpr int kSeeds = 5;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto scenario = BuildScenario({.classes = 10, .n = 200, .features = 20,
                                   .separation = 0.5, .hidden = 64,
                                   .epochs = 60,
                                   .seed = static_cast<uint64_t>(40 + seed)});
    ASSERT_TRUE(scenario.ok()) << scenario.status();
    const TrainedModel& target = scenario->target;
    auto report = ReportForModel(target.topology, target.report.layer_maxima,
                                 200, target.config.l2_coefficient);
    ASSERT_TRUE(report.ok());
    BudgetLedger ledger(*PrivacyBudget::ForPerQuery(
        0.01, 400, 10, MechanismKind::kGaussian, 200));
    auto predictor =
        DpPredictor::Create(target.topology, target.params, *report, &ledger);
    ASSERT_TRUE(predictor.ok());
    RandomStream rng(DeriveSeed(seed, 0, "predict"));
    QueryFn dp = [&](std::span<const double> x)
        -> absl::StatusOr<std::vector<double>> {
      auto out = predictor->Predict(x, rng);
      if (!out.ok()) return out.status();
      return out->probabilities;
    };
    baseline_total += Leakage(*scenario, CleanTarget(target));
    dp_total += Leakage(*scenario, dp);
  }
  EXPECT_LE(dp_total / kSeeds, baseline_total / kSeeds);
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(LeakageDirectionTest, LeakageCorrelatesWithAccuracyGap) {
  std::vector<double> gaps;
  std::vector<double> leakages;
  int index = 0;
  for (double separation : {0.3, 0.8, 1.5, 3.0}) {
    for (int epochs : {10, 60}) {
      auto scenario = BuildScenario({.classes = 10, .n = 200, .features = 20,
                                     .separation = separation, .hidden = 32,
                                     .epochs = epochs,
                                     .seed =
                                         static_cast<uint64_t>(60 + index++)});
      ASSERT_TRUE(scenario.ok()) << scenario.status();
      const TrainingReport& r = scenario->target.report;
      gaps.push_back(r.train_accuracy - *r.test_accuracy);
      leakages.push_back(Leakage(*scenario, CleanTarget(scenario->target)));
    }
  }
  EXPECT_GT(Pearson(gaps, leakages), 0.0);
}

}  // namespace
}  // namespace dpnn
