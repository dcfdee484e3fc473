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

// Command-line front end: train, sensitivity, budget, predict-dp, attack,
// experiment and synth subcommands.
//
// Exit codes: 0 success, 1 usage or input error, 2 numeric failure,
// 3 privacy budget exhausted.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpnn/budget.h"
#include "dpnn/checkpoint.h"
#include "dpnn/dataset.h"
#include "dpnn/dp_predict.h"
#include "dpnn/experiment.h"
#include "dpnn/io.h"
#include "dpnn/mechanisms.h"
#include "dpnn/mi_attack.h"
#include "dpnn/sensitivity.h"
#include "dpnn/trainer.h"
#include "json.hpp"

namespace dpnn {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitBudget = 3;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInternal:
      return kExitNumeric;
    case absl::StatusCode::kResourceExhausted:
      return kExitBudget;
    default:
      return kExitUsage;
  }
}

std::string Real(double v) { return nlohmann::json(v).dump(); }

struct TrainFlags {
  std::string data;
  std::string test;
  std::string label_column = "label";
  bool normalize = false;
  std::vector<int> hidden = {128};
  TrainingConfig config;
  std::string loss = "cross_entropy";
  std::string out;
};

absl::StatusOr<LossKind> ParseLoss(const std::string& name) {
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  if (name == "convexified" || name == "convexified_cross_entropy") {
    return LossKind::kConvexifiedCrossEntropy;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown loss '", name,
                   "' (cross_entropy|convexified_cross_entropy)"));
}

absl::Status RunTrain(TrainFlags flags) {
  auto loss = ParseLoss(flags.loss);
  if (!loss.ok()) return loss.status();
  flags.config.loss_kind = *loss;
  CsvFormat format;
  format.label_column = flags.label_column;
  auto train = LoadCsv(flags.data, format);
  if (!train.ok()) return train.status();
  std::optional<LabeledDataset> test;
  if (!flags.test.empty()) {
    format.class_count = train->class_count;
    auto loaded = LoadCsv(flags.test, format);
    if (!loaded.ok()) return loaded.status();
    test = std::move(*loaded);
  }
  std::optional<MinMaxScaler> scaler;
  if (flags.normalize) {
    scaler = MinMaxScaler::Fit(*train);
    scaler->Apply(*train);
    if (test) scaler->Apply(*test);
  }
  std::vector<int> widths = {static_cast<int>(train->feature_count)};
  widths.insert(widths.end(), flags.hidden.begin(), flags.hidden.end());
  widths.push_back(train->class_count);
  auto topology = NetworkTopology::Create(widths);
  if (!topology.ok()) return topology.status();
  auto model = Train(*train, test ? &*test : nullptr, *topology, flags.config);
  if (!model.ok()) return model.status();
  if (auto s = SaveCheckpoint({*model, scaler}, flags.out); !s.ok()) return s;
  std::cout << "train_accuracy=" << FormatFixed6(model->report.train_accuracy)
            << "\n";
  if (model->report.test_accuracy) {
    std::cout << "test_accuracy=" << FormatFixed6(*model->report.test_accuracy)
              << "\n";
  }
  std::cout << "checkpoint=" << flags.out << "\n";
  return absl::OkStatus();
}

struct SensitivityFlags {
  std::string model;
  std::size_t n = 0;
  std::optional<double> l2;
  std::string out_prefix;
};

absl::Status RunSensitivity(const SensitivityFlags& flags) {
  auto checkpoint = LoadCheckpoint(flags.model);
  if (!checkpoint.ok()) return checkpoint.status();
  const TrainedModel& model = checkpoint->model;
  const std::size_t n = flags.n > 0 ? flags.n : model.training_rows;
  auto report =
      ReportForModel(model.topology, model.report.layer_maxima, n,
                     flags.l2.value_or(model.config.l2_coefficient));
  if (!report.ok()) return report.status();
  const std::string text = ToKeyValueText(*report);
  std::cout << text;
  if (!flags.out_prefix.empty()) {
    if (auto s = WriteTextFile(flags.out_prefix + ".txt", text); !s.ok()) {
      return s;
    }
    if (auto s = WriteTextFile(flags.out_prefix + ".json", ToJson(*report));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

struct BudgetFlags {
  double epsilon = 0.0;
  std::size_t queries = 1;
  int classes = 2;
  std::string mechanism = "laplace";
  std::size_t training_rows = 0;
};

absl::Status RunBudget(const BudgetFlags& flags) {
  auto mechanism = ParseMechanism(flags.mechanism);
  if (!mechanism.ok()) return mechanism.status();
  std::optional<std::size_t> rows;
  if (flags.training_rows > 0) rows = flags.training_rows;
  auto budget = PrivacyBudget::Create(flags.epsilon, flags.queries,
                                      flags.classes, *mechanism, rows);
  if (!budget.ok()) return budget.status();
  std::cout << "mechanism=" << MechanismName(budget->mechanism) << "\n"
            << "epsilon_total=" << Real(budget->epsilon_total) << "\n"
            << "queries=" << budget->queries_allowed << "\n"
            << "classes=" << budget->class_count << "\n"
            << "epsilon_per_query=" << Real(budget->epsilon_per_query) << "\n"
            << "epsilon_sampling=" << Real(budget->epsilon_sampling) << "\n"
            << "epsilon_neuron=" << Real(budget->epsilon_neuron) << "\n";
  if (budget->mechanism == MechanismKind::kGaussian) {
    std::cout << "delta=" << Real(budget->delta) << "\n"
              << "delta_of_epsilon_total="
              << Real(DeltaOfEpsilon(budget->epsilon_total)) << "\n";
  }
  return absl::OkStatus();
}

struct DpFlags {
  std::string sensitivity;
  double epsilon = 0.0;
  std::size_t queries = 0;
  std::string mechanism = "laplace";
  std::string sampling_sensitivity = "delta_p";
};

struct DpTarget {
  std::unique_ptr<BudgetLedger> ledger;
  std::optional<DpPredictor> predictor;
};

absl::StatusOr<DpTarget> MakeDpTarget(const DpFlags& flags,
                                      const TrainedModel& model) {
  auto text = ReadTextFile(flags.sensitivity);
  if (!text.ok()) return text.status();
  auto report = SensitivityReportFromJson(*text);
  if (!report.ok()) return report.status();
  auto mechanism = ParseMechanism(flags.mechanism);
  if (!mechanism.ok()) return mechanism.status();
  auto budget = PrivacyBudget::Create(flags.epsilon, flags.queries,
                                      model.topology.class_count(), *mechanism,
                                      model.training_rows);
  if (!budget.ok()) return budget.status();
  DpPredictorOptions options;
  if (flags.sampling_sensitivity == "exp_delta_p") {
    options.sampling_sensitivity = SamplingSensitivity::kExpDeltaP;
  } else if (flags.sampling_sensitivity != "delta_p") {
    return absl::InvalidArgumentError(
        "sampling sensitivity must be delta_p or exp_delta_p");
  }
  DpTarget target;
  target.ledger = std::make_unique<BudgetLedger>(*budget);
  auto predictor = DpPredictor::Create(model.topology, model.params, *report,
                                       target.ledger.get(), options);
  if (!predictor.ok()) return predictor.status();
  target.predictor.emplace(*predictor);
  return target;
}

struct PredictFlags {
  std::string model;
  DpFlags dp;
  std::string input;
  uint64_t seed = 0;
  std::string out;
};

absl::Status RunPredictDp(const PredictFlags& flags) {
  auto checkpoint = LoadCheckpoint(flags.model);
  if (!checkpoint.ok()) return checkpoint.status();
  const TrainedModel& model = checkpoint->model;
  auto target = MakeDpTarget(flags.dp, model);
  if (!target.ok()) return target.status();
  CsvFormat format;
  format.require_labels = false;
  auto queries = LoadCsv(flags.input, format);
  if (!queries.ok()) return queries.status();
  if (checkpoint->scaler) checkpoint->scaler->Apply(*queries);

  RandomStream rng(flags.seed);
  const DpBatchResult batch = target->predictor->PredictBatch(*queries, rng);
  std::string out = "id";
  for (int c = 0; c < model.topology.class_count(); ++c) {
    absl::StrAppend(&out, ",p", c);
  }
  out += ",sampled_neuron,epsilon_consumed\n";
  for (std::size_t i = 0; i < batch.predictions.size(); ++i) {
    const DpPrediction& p = batch.predictions[i];
    absl::StrAppend(&out, queries->row_ids[i]);
    for (double v : p.probabilities) absl::StrAppend(&out, ",", Real(v));
    absl::StrAppend(&out, ",", p.sampled_neuron, ",",
                    Real(p.epsilon_consumed), "\n");
  }
  if (flags.out.empty()) {
    std::cout << out;
  } else if (auto s = WriteTextFile(flags.out, out); !s.ok()) {
    return s;
  }
  std::cerr << "answered " << batch.predictions.size() << " of "
            << queries->rows() << " queries; "
            << target->ledger->queries_remaining() << " remaining\n";
  if (batch.refusal) return *batch.refusal;
  return absl::OkStatus();
}

struct AttackFlags {
  std::string model;
  std::string members;
  std::string non_members;
  std::string pool;
  std::string label_column = "label";
  std::size_t shadows = 10;
  std::size_t shadow_rows = 0;
  int attack_hidden = 64;
  int attack_epochs = 100;
  uint64_t seed = 0;
  bool dp = false;
  DpFlags dp_flags;
  std::string out;
  std::string dump;
};

absl::Status RunAttack(const AttackFlags& flags) {
  auto checkpoint = LoadCheckpoint(flags.model);
  if (!checkpoint.ok()) return checkpoint.status();
  const TrainedModel& model = checkpoint->model;
  CsvFormat format;
  format.label_column = flags.label_column;
  format.class_count = model.topology.class_count();
  auto members = LoadCsv(flags.members, format);
  if (!members.ok()) return members.status();
  auto non_members = LoadCsv(flags.non_members, format);
  if (!non_members.ok()) return non_members.status();
  auto pool = LoadCsv(flags.pool, format);
  if (!pool.ok()) return pool.status();
  if (checkpoint->scaler) {
    checkpoint->scaler->Apply(*members);
    checkpoint->scaler->Apply(*non_members);
    checkpoint->scaler->Apply(*pool);
  }

  AttackConfig attack;
  attack.shadow_count = flags.shadows;
  attack.shadow_train_rows = flags.shadow_rows;
  const std::vector<int>& widths = model.topology.widths();
  attack.shadow_hidden_widths.assign(widths.begin() + 1, widths.end() - 1);
  attack.shadow_training = model.config;
  attack.attack_hidden_width = flags.attack_hidden;
  attack.attack_training.epochs = flags.attack_epochs;
  attack.seed = flags.seed;
  auto corpus = BuildShadowCorpus(*pool, members->row_ids, attack);
  if (!corpus.ok()) return corpus.status();
  auto models = TrainAttackModels(*corpus, attack);
  if (!models.ok()) return models.status();
  for (int label : models->skipped_classes()) {
    std::cerr << "warning: no shadow rows for class " << label
              << "; its queries are judged non-members\n";
  }

  QueryFn query;
  std::optional<DpTarget> dp_target;
  RandomStream rng(DeriveSeed(flags.seed, 0, "attack-dp-queries"));
  if (flags.dp) {
    auto target = MakeDpTarget(flags.dp_flags, model);
    if (!target.ok()) return target.status();
    dp_target = std::move(*target);
    query = [&](std::span<const double> x)
        -> absl::StatusOr<std::vector<double>> {
      auto p = dp_target->predictor->Predict(x, rng);
      if (!p.ok()) return p.status();
      return std::move(p->probabilities);
    };
  } else {
    query = [&](std::span<const double> x)
        -> absl::StatusOr<std::vector<double>> {
      auto trace = Forward(model.topology, model.params, x);
      if (!trace.ok()) return trace.status();
      return std::move(trace->probabilities);
    };
  }
  auto eval = EvaluateLeakage(query, *members, *non_members, *models);
  if (!eval.ok()) return eval.status();

  const AttackResult& r = eval->result;
  nlohmann::json doc = {{"true_positive_rate", r.true_positive_rate},
                        {"false_positive_rate", r.false_positive_rate},
                        {"privacy_leakage", r.privacy_leakage},
                        {"privacy_leakage_clamped", r.ClampedLeakage()},
                        {"attack_accuracy", r.attack_accuracy},
                        {"positives", r.positives},
                        {"negatives", r.negatives},
                        {"skipped_classes", models->skipped_classes()},
                        {"dp", flags.dp}};
  const std::string json_text = doc.dump(1) + "\n";
  if (flags.out.empty()) {
    std::cout << json_text;
  } else if (auto s = WriteTextFile(flags.out, json_text); !s.ok()) {
    return s;
  }
  if (!flags.dump.empty()) {
    std::string dump = "id,member,label,predicted_member\n";
    const std::size_t half = members->rows();
    for (std::size_t i = 0; i < eval->verdicts.size(); ++i) {
      const AttackVerdict& v = eval->verdicts[i];
      const int64_t id = i < half ? members->row_ids[i]
                                  : non_members->row_ids[i - half];
      absl::StrAppend(&dump, id, ",", v.member ? 1 : 0, ",", v.label, ",",
                      v.predicted_member ? 1 : 0, "\n");
    }
    if (auto s = WriteTextFile(flags.dump, dump); !s.ok()) return s;
  }
  return absl::OkStatus();
}

struct SynthFlags {
  SyntheticSpec spec;
  std::string out;
};

absl::Status RunSynth(const SynthFlags& flags) {
  auto data = MakeSynthetic(flags.spec);
  if (!data.ok()) return data.status();
  return WriteCsv(*data, flags.out);
}

struct ExperimentFlags {
  ExperimentConfig config;
  std::vector<std::string> mechanisms = {"gaussian"};
};

absl::Status RunExperimentCommand(ExperimentFlags flags) {
  flags.config.mechanisms.clear();
  for (const std::string& name : flags.mechanisms) {
    auto mechanism = ParseMechanism(name);
    if (!mechanism.ok()) return mechanism.status();
    flags.config.mechanisms.push_back(*mechanism);
  }
  auto report = RunExperiment(flags.config);
  if (!report.ok()) return report.status();
  std::cout << FormatReportCsv(*report);
  for (const std::string& failure : report->failures) {
    std::cerr << "failed: " << failure << "\n";
  }
  std::cerr << "report written to " << flags.config.output_dir
            << "/report.csv\n";
  return absl::OkStatus();
}

void AddTrainingFlags(CLI::App* cmd, TrainingConfig& config) {
  cmd->add_option("--learning_rate", config.learning_rate, "Adam step size")
      ->capture_default_str();
  cmd->add_option("--batch_size", config.batch_size)->capture_default_str();
  cmd->add_option("--epochs", config.epochs)->capture_default_str();
  cmd->add_option("--l2", config.l2_coefficient,
                  "Multiplier of the squared L2 norm of the weights")
      ->capture_default_str();
  cmd->add_option("--alpha", config.alpha,
                  "Risk factor of the convexified loss")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed)->capture_default_str();
}

void AddDpFlags(CLI::App* cmd, DpFlags& flags, bool required) {
  auto* report = cmd->add_option("--sensitivity", flags.sensitivity,
                                 "Sensitivity report JSON");
  auto* epsilon = cmd->add_option("--epsilon", flags.epsilon,
                                  "Total privacy budget over all queries");
  auto* queries = cmd->add_option("--queries", flags.queries,
                                  "Number of queries the budget covers");
  if (required) {
    report->required();
    epsilon->required();
    queries->required();
  }
  cmd->add_option("--mechanism", flags.mechanism, "laplace or gaussian")
      ->capture_default_str();
  cmd->add_option("--sampling_sensitivity", flags.sampling_sensitivity,
                  "Exponential-mechanism sensitivity: delta_p or exp_delta_p")
      ->capture_default_str();
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private neural-network predictions"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML file; [experiment] etc. sections set subcommand flags");

  absl::Status result = absl::OkStatus();

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Train a model from CSV");
  train_cmd->add_option("--data", train.data, "Training CSV")->required();
  train_cmd->add_option("--test", train.test, "Optional test CSV");
  train_cmd->add_option("--label_column", train.label_column)
      ->capture_default_str();
  train_cmd->add_flag("--normalize", train.normalize,
                      "Min-max scale features to [-1, 1]");
  train_cmd->add_option("--hidden", train.hidden, "Hidden layer widths")
      ->capture_default_str();
  train_cmd->add_option("--loss", train.loss,
                        "cross_entropy or convexified_cross_entropy")
      ->capture_default_str();
  AddTrainingFlags(train_cmd, train.config);
  train_cmd->add_option("--out", train.out, "Checkpoint path")->required();
  train_cmd->callback([&] { result = RunTrain(train); });

  SensitivityFlags sens;
  auto* sens_cmd =
      app.add_subcommand("sensitivity", "Sensitivity report for a model");
  sens_cmd->add_option("--model", sens.model, "Checkpoint")->required();
  sens_cmd->add_option("--n", sens.n,
                       "Training-set size (default: from checkpoint)");
  sens_cmd->add_option("--l2", sens.l2,
                       "L2 coefficient (default: from checkpoint)");
  sens_cmd->add_option("--out", sens.out_prefix,
                       "Output prefix; writes <prefix>.txt and .json");
  sens_cmd->callback([&] { result = RunSensitivity(sens); });

  BudgetFlags budget;
  auto* budget_cmd = app.add_subcommand("budget", "Per-query budget split");
  budget_cmd->add_option("--epsilon", budget.epsilon, "Total budget")
      ->required();
  budget_cmd->add_option("--queries", budget.queries)->capture_default_str();
  budget_cmd->add_option("--classes", budget.classes)->required();
  budget_cmd->add_option("--mechanism", budget.mechanism)
      ->capture_default_str();
  budget_cmd->add_option("--training_rows", budget.training_rows,
                         "Training-set size, for the Gaussian delta");
  budget_cmd->callback([&] { result = RunBudget(budget); });

  PredictFlags predict;
  auto* predict_cmd =
      app.add_subcommand("predict-dp", "Differentially private predictions");
  predict_cmd->add_option("--model", predict.model, "Checkpoint")->required();
  AddDpFlags(predict_cmd, predict.dp, /*required=*/true);
  predict_cmd->add_option("--input", predict.input, "Query CSV")->required();
  predict_cmd->add_option("--seed", predict.seed)->capture_default_str();
  predict_cmd->add_option("--out", predict.out, "Output CSV (default stdout)");
  predict_cmd->callback([&] { result = RunPredictDp(predict); });

  AttackFlags attack;
  auto* attack_cmd =
      app.add_subcommand("attack", "Shadow-model membership inference");
  attack_cmd->add_option("--model", attack.model, "Target checkpoint")
      ->required();
  attack_cmd->add_option("--members", attack.members,
                         "Target training rows (CSV with ids)")
      ->required();
  attack_cmd->add_option("--non_members", attack.non_members,
                         "Held-out rows, same count as members")
      ->required();
  attack_cmd->add_option("--pool", attack.pool,
                         "Shadow data pool, disjoint from members")
      ->required();
  attack_cmd->add_option("--label_column", attack.label_column)
      ->capture_default_str();
  attack_cmd->add_option("--shadows", attack.shadows)->capture_default_str();
  attack_cmd->add_option("--shadow_rows", attack.shadow_rows,
                         "Rows per shadow split (0 = pool / (2 k))")
      ->capture_default_str();
  attack_cmd->add_option("--attack_hidden", attack.attack_hidden)
      ->capture_default_str();
  attack_cmd->add_option("--attack_epochs", attack.attack_epochs)
      ->capture_default_str();
  attack_cmd->add_option("--seed", attack.seed)->capture_default_str();
  attack_cmd->add_flag("--dp", attack.dp,
                       "Attack the DP predictor instead of the raw model");
  AddDpFlags(attack_cmd, attack.dp_flags, /*required=*/false);
  attack_cmd->add_option("--out", attack.out, "Result JSON (default stdout)");
  attack_cmd->add_option("--dump", attack.dump, "Per-sample verdict CSV");
  attack_cmd->callback([&] { result = RunAttack(attack); });

  ExperimentFlags exp;
  ExperimentConfig& ec = exp.config;
  ec.epsilons = {0.01, 0.1, 1.0, 10.0, 100.0};
  auto* exp_cmd =
      app.add_subcommand("experiment", "Full train/attack/DP sweep");
  exp_cmd->add_option("--dataset", ec.dataset_path,
                      "CSV dataset (default: synthetic)");
  exp_cmd->add_option("--label_column", ec.label_column)
      ->capture_default_str();
  exp_cmd->add_option("--normalize", ec.normalize,
                      "Min-max scale CSV features (true/false)")
      ->capture_default_str();
  exp_cmd->add_option("--synthetic_classes", ec.synthetic.classes)
      ->capture_default_str();
  exp_cmd->add_option("--synthetic_rows", ec.synthetic.rows)
      ->capture_default_str();
  exp_cmd->add_option("--synthetic_features", ec.synthetic.features)
      ->capture_default_str();
  exp_cmd->add_option("--synthetic_separation", ec.synthetic.separation)
      ->capture_default_str();
  exp_cmd->add_option("--synthetic_seed", ec.synthetic.seed)
      ->capture_default_str();
  exp_cmd->add_option("--train_rows", ec.train_rows,
                      "Target training-set size n")
      ->required();
  exp_cmd->add_option("--hidden", ec.hidden_widths)->capture_default_str();
  AddTrainingFlags(exp_cmd, ec.training);
  exp_cmd->add_option("--epsilons", ec.epsilons, "Epsilon grid")
      ->capture_default_str();
  exp_cmd->add_option("--mechanisms", exp.mechanisms)->capture_default_str();
  exp_cmd->add_option("--queries_per_budget", ec.queries_per_budget,
                      "0: grid values are per-query budgets")
      ->capture_default_str();
  exp_cmd->add_option("--shadows", ec.shadow_count)->capture_default_str();
  exp_cmd->add_option("--attack_hidden", ec.attack_hidden_width)
      ->capture_default_str();
  exp_cmd->add_option("--attack_learning_rate", ec.attack_learning_rate)
      ->capture_default_str();
  exp_cmd->add_option("--attack_l2", ec.attack_l2_coefficient)
      ->capture_default_str();
  exp_cmd->add_option("--attack_epochs", ec.attack_epochs)
      ->capture_default_str();
  exp_cmd->add_option("--repetitions", ec.repetitions)->capture_default_str();
  exp_cmd->add_option("--output_dir", ec.output_dir)->required();
  exp_cmd->add_option("--master_seed", ec.master_seed)->capture_default_str();
  exp_cmd->callback([&] { result = RunExperimentCommand(exp); });

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic CSV");
  synth_cmd->add_option("--classes", synth.spec.classes)->capture_default_str();
  synth_cmd->add_option("--rows", synth.spec.rows)->capture_default_str();
  synth_cmd->add_option("--features", synth.spec.features)
      ->capture_default_str();
  synth_cmd->add_option("--separation", synth.spec.separation)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.spec.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output CSV")->required();
  synth_cmd->callback([&] { result = RunSynth(synth); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!result.ok()) {
    std::cerr << "error: " << result << "\n";
  }
  return ExitCodeFor(result);
}

}  // namespace
}  // namespace dpnn

int main(int argc, char** argv) { return dpnn::Main(argc, argv); }
