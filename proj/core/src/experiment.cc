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

#include "dpnn/experiment.h"

#include <cmath>
#include <filesystem>
#include <optional>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpnn/budget.h"
#include "dpnn/checkpoint.h"
#include "dpnn/dp_predict.h"
#include "dpnn/io.h"
#include "dpnn/mi_attack.h"
#include "dpnn/sensitivity.h"
#include "json.hpp"

namespace dpnn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kSummaryFile[] = "summary.json";

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

// Sample standard deviation; 0 for a single value.
Stats Summarize(const std::vector<double>& values) {
  Stats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string DpTag(MechanismKind mechanism, std::size_t eps_index) {
  return absl::StrCat(MechanismName(mechanism), "_eps", eps_index);
}

absl::Status WriteVerdicts(const std::string& path,
                           const AttackEvaluation& eval) {
  std::string out = "sample,member,label,predicted_member\n";
  for (std::size_t i = 0; i < eval.verdicts.size(); ++i) {
    const AttackVerdict& v = eval.verdicts[i];
    absl::StrAppend(&out, i, ",", v.member ? 1 : 0, ",", v.label, ",",
                    v.predicted_member ? 1 : 0, "\n");
  }
  return WriteTextFile(path, out);
}

absl::StatusOr<LabeledDataset> LoadExperimentData(
    const ExperimentConfig& config) {
  if (config.dataset_path.empty()) return MakeSynthetic(config.synthetic);
  CsvFormat format;
  format.label_column = config.label_column;
  return LoadCsv(config.dataset_path, format);
}

double ArgmaxAccuracy(const std::vector<std::vector<double>>& predictions,
                const std::vector<int>& labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (static_cast<int>(Argmax(predictions[i])) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(predictions.size());
}

// One repetition end to end; returns its summary document.
absl::StatusOr<json> RunRepetition(const ExperimentConfig& config,
                                   const LabeledDataset& data, int rep,
                                   const std::string& dir) {
  auto split = SplitDataset(data, config.train_rows, config.train_rows,
                            DeriveSeed(config.master_seed, rep, "split"));
  if (!split.ok()) return split.status();
  std::optional<MinMaxScaler> scaler;
  if (config.normalize && !config.dataset_path.empty()) {
    scaler = MinMaxScaler::Fit(split->train);
    scaler->Apply(split->train);
    scaler->Apply(split->test);
    scaler->Apply(split->rest);
  }
  std::vector<int> widths = {static_cast<int>(data.feature_count)};
  widths.insert(widths.end(), config.hidden_widths.begin(),
                config.hidden_widths.end());
  widths.push_back(data.class_count);
  auto topology = NetworkTopology::Create(widths);
  if (!topology.ok()) return topology.status();

  json summary;
  summary["repetition"] = rep;
  summary["fingerprint"] = config.FingerprintJson();

  // Baselines. Both losses start from the same seed.
  TrainingConfig base = config.training;
  base.seed = DeriveSeed(config.master_seed, rep, "target");
  struct Target {
    std::string name;
    TrainedModel model;
    SensitivityReport report;
  };
  std::vector<Target> targets;
  for (LossKind kind :
       {LossKind::kCrossEntropy, LossKind::kConvexifiedCrossEntropy}) {
    TrainingConfig cfg = base;
    cfg.loss_kind = kind;
    auto model = Train(split->train, &split->test, *topology, cfg);
    if (!model.ok()) return model.status();
    auto report = ReportForModel(model->topology, model->report.layer_maxima,
                                 model->training_rows, cfg.l2_coefficient);
    if (!report.ok()) return report.status();
    const std::string name =
        kind == LossKind::kCrossEntropy ? "plain" : "convexified";
    if (auto s = SaveCheckpoint({*model, scaler},
                                absl::StrCat(dir, "/target_", name, ".json"));
        !s.ok()) {
      return s;
    }
    if (auto s = WriteTextFile(absl::StrCat(dir, "/sensitivity_", name,
                                            ".json"),
                               ToJson(*report));
        !s.ok()) {
      return s;
    }
    if (auto s = WriteTextFile(absl::StrCat(dir, "/sensitivity_", name,
                                            ".txt"),
                               ToKeyValueText(*report));
        !s.ok()) {
      return s;
    }
    targets.push_back({name, std::move(*model), *report});
  }

  // Shadow models mimic the DP target's training recipe.
  AttackConfig attack;
  attack.shadow_count = config.shadow_count;
  attack.shadow_train_rows = std::min<std::size_t>(
      config.train_rows, split->rest.rows() / (2 * config.shadow_count));
  attack.shadow_hidden_widths = config.hidden_widths;
  attack.shadow_training = base;
  attack.shadow_training.loss_kind = LossKind::kConvexifiedCrossEntropy;
  attack.attack_hidden_width = config.attack_hidden_width;
  attack.attack_training.learning_rate = config.attack_learning_rate;
  attack.attack_training.l2_coefficient = config.attack_l2_coefficient;
  attack.attack_training.epochs = config.attack_epochs;
  attack.attack_training.batch_size = config.training.batch_size;
  attack.seed = DeriveSeed(config.master_seed, rep, "attack");
  auto corpus = BuildShadowCorpus(split->rest, split->train.row_ids, attack);
  if (!corpus.ok()) return corpus.status();
  auto attack_models = TrainAttackModels(*corpus, attack);
  if (!attack_models.ok()) return attack_models.status();
  summary["skipped_attack_classes"] = attack_models->skipped_classes();

  for (const Target& target : targets) {
    const NetworkTopology& topo = target.model.topology;
    const ModelParams& params = target.model.params;
    QueryFn clean = [&](std::span<const double> x)
        -> absl::StatusOr<std::vector<double>> {
      auto trace = Forward(topo, params, x);
      if (!trace.ok()) return trace.status();
      return std::move(trace->probabilities);
    };
    auto eval = EvaluateLeakage(clean, split->train, split->test,
                                *attack_models);
    if (!eval.ok()) return eval.status();
    if (auto s = WriteVerdicts(
            absl::StrCat(dir, "/attack_baseline_", target.name, ".csv"),
            *eval);
        !s.ok()) {
      return s;
    }
    const double test_acc = target.model.report.test_accuracy.value_or(0.0);
    summary["baselines"][target.name] = {
        {"train_accuracy", target.model.report.train_accuracy},
        {"test_accuracy", test_acc},
        {"accuracy_gap", target.model.report.train_accuracy - test_acc},
        {"oaro_bound", target.report.oaro_bound},
        {"leakage", eval->result.privacy_leakage}};
  }

  // DP prediction against the convexified baseline.
  const Target& dp_target = targets.back();
  const double baseline_test_acc =
      dp_target.model.report.test_accuracy.value_or(0.0);
  const std::size_t evaluation_queries =
      split->train.rows() + split->test.rows();
  summary["cells"] = json::array();
  for (MechanismKind mechanism : config.mechanisms) {
    for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
      const double epsilon = config.epsilons[e];
      const double per_query =
          config.queries_per_budget > 0
              ? PerQueryBudget(epsilon, config.queries_per_budget, mechanism)
              : epsilon;
      auto budget = PrivacyBudget::ForPerQuery(
          per_query, evaluation_queries, data.class_count, mechanism,
          dp_target.model.training_rows);
      if (!budget.ok()) return budget.status();
      BudgetLedger ledger(*budget);
      auto predictor =
          DpPredictor::Create(dp_target.model.topology,
                              dp_target.model.params, dp_target.report,
                              &ledger);
      if (!predictor.ok()) return predictor.status();
      RandomStream rng(DeriveSeed(config.master_seed, rep,
                                  absl::StrCat("dp-", DpTag(mechanism, e))));
      std::vector<std::vector<double>> answers;
      answers.reserve(evaluation_queries);
      QueryFn private_query = [&](std::span<const double> x)
          -> absl::StatusOr<std::vector<double>> {
        auto prediction = predictor->Predict(x, rng);
        if (!prediction.ok()) return prediction.status();
        answers.push_back(prediction->probabilities);
        return std::move(prediction->probabilities);
      };
      auto eval = EvaluateLeakage(private_query, split->train, split->test,
                                  *attack_models);
      if (!eval.ok()) return eval.status();
      // Non-member queries are the test set, answered last.
      const std::vector<std::vector<double>> test_answers(
          answers.end() - static_cast<std::ptrdiff_t>(split->test.rows()),
          answers.end());
      const double dp_acc = ArgmaxAccuracy(test_answers, split->test.labels);
      auto loss = AccuracyLoss(dp_acc, baseline_test_acc);
      if (!loss.ok()) return loss.status();
      if (auto s = WriteVerdicts(absl::StrCat(dir, "/attack_",
                                              DpTag(mechanism, e), ".csv"),
                                 *eval);
          !s.ok()) {
        return s;
      }
      summary["cells"].push_back(
          {{"mechanism", MechanismName(mechanism)},
           {"epsilon", epsilon},
           {"epsilon_per_query", per_query},
           {"dp_test_accuracy", dp_acc},
           {"accuracy_loss", *loss},
           {"leakage", eval->result.privacy_leakage}});
    }
  }
  return summary;
}

std::string ConfigJson(const ExperimentConfig& config) {
  json doc = json::parse(config.FingerprintJson());
  doc["repetitions"] = config.repetitions;
  doc["output_dir"] = config.output_dir;
  return doc.dump(1) + "\n";
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (train_rows < 1) {
    return absl::InvalidArgumentError("train_rows must be at least 1");
  }
  if (epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  for (double e : epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon grid values must be positive, got ", e));
    }
  }
  if (mechanisms.empty()) {
    return absl::InvalidArgumentError("no mechanism selected");
  }
  if (repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be at least 1");
  }
  if (shadow_count < 1) {
    return absl::InvalidArgumentError("shadow_count must be at least 1");
  }
  if (output_dir.empty()) {
    return absl::InvalidArgumentError("output_dir is required");
  }
  if (hidden_widths.empty()) {
    return absl::InvalidArgumentError("need at least one hidden layer");
  }
  return training.Validate();
}

std::string ExperimentConfig::FingerprintJson() const {
  json mechs = json::array();
  for (MechanismKind m : mechanisms) mechs.push_back(MechanismName(m));
  json doc = {
      {"dataset_path", dataset_path},
      {"label_column", label_column},
      {"normalize", normalize},
      {"synthetic",
       {{"classes", synthetic.classes},
        {"rows", synthetic.rows},
        {"features", synthetic.features},
        {"separation", synthetic.separation},
        {"seed", synthetic.seed}}},
      {"train_rows", train_rows},
      {"hidden_widths", hidden_widths},
      {"training",
       {{"learning_rate", training.learning_rate},
        {"batch_size", training.batch_size},
        {"epochs", training.epochs},
        {"l2_coefficient", training.l2_coefficient},
        {"alpha", training.alpha}}},
      {"epsilons", epsilons},
      {"mechanisms", mechs},
      {"queries_per_budget", queries_per_budget},
      {"shadow_count", shadow_count},
      {"attack",
       {{"hidden_width", attack_hidden_width},
        {"learning_rate", attack_learning_rate},
        {"l2_coefficient", attack_l2_coefficient},
        {"epochs", attack_epochs}}},
      {"master_seed", master_seed}};
  return doc.dump();
}

double TheoreticalLeakageBound(double epsilon, double baseline_leakage) {
  return std::min(std::expm1(epsilon), baseline_leakage);
}

std::string RepetitionDir(const std::string& output_dir, int repetition) {
  return absl::StrFormat("%s/rep_%03d", output_dir, repetition);
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  auto data = LoadExperimentData(config);
  if (!data.ok()) return data.status();

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create ", config.output_dir, ": ", ec.message()));
  }
  if (auto s = WriteTextFile(config.output_dir + "/config.json",
                             ConfigJson(config));
      !s.ok()) {
    return s;
  }

  json metadata;
  metadata["config"] = json::parse(config.FingerprintJson());
  metadata["dataset"] = {{"name", data->name},
                         {"rows", data->rows()},
                         {"features", data->feature_count},
                         {"classes", data->class_count}};
  metadata["repetitions"] = json::array();
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::string dir = RepetitionDir(config.output_dir, rep);
    const std::string summary_path = dir + "/" + kSummaryFile;
    json entry = {{"repetition", rep}, {"directory", dir}};
    if (auto existing = ReadTextFile(summary_path); existing.ok()) {
      json old = json::parse(*existing, nullptr, false);
      if (!old.is_discarded() &&
          old.value("fingerprint", "") == config.FingerprintJson()) {
        entry["status"] = "resumed";
        metadata["repetitions"].push_back(entry);
        continue;
      }
    }
    fs::create_directories(dir, ec);
    fs::remove(dir + "/error.txt", ec);
    auto summary = RunRepetition(config, *data, rep, dir);
    if (!summary.ok()) {
      (void)WriteTextFile(dir + "/error.txt",
                          std::string(summary.status().ToString()) + "\n");
      fs::remove(summary_path, ec);
      entry["status"] = "failed";
      entry["error"] = summary.status().ToString();
    } else {
      if (auto s = WriteTextFile(summary_path, summary->dump(1) + "\n");
          !s.ok()) {
        return s;
      }
      entry["status"] = "completed";
    }
    metadata["repetitions"].push_back(entry);
  }

  auto report = AssembleReport(config);
  if (!report.ok()) return report.status();
  metadata["report_rows"] = report->row_count();
  if (auto s = WriteTextFile(config.output_dir + "/run_metadata.json",
                             metadata.dump(1) + "\n");
      !s.ok()) {
    return s;
  }
  if (auto s = WriteTextFile(config.output_dir + "/report.csv",
                             FormatReportCsv(*report));
      !s.ok()) {
    return s;
  }
  return report;
}

absl::StatusOr<ExperimentReport> AssembleReport(
    const ExperimentConfig& config) {
  ExperimentReport report;
  report.repetitions = config.repetitions;
  std::vector<json> summaries;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::string dir = RepetitionDir(config.output_dir, rep);
    auto text = ReadTextFile(dir + "/" + kSummaryFile);
    if (!text.ok()) {
      auto error = ReadTextFile(dir + "/error.txt");
      report.failures.push_back(absl::StrCat(
          "rep ", rep, ": ",
          error.ok() ? absl::StripTrailingAsciiWhitespace(*error)
                     : "no summary on disk"));
      continue;
    }
    json doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded()) {
      report.failures.push_back(absl::StrCat("rep ", rep, ": corrupt summary"));
      continue;
    }
    summaries.push_back(std::move(doc));
  }

  try {
    for (const char* name : {"plain", "convexified"}) {
      std::vector<double> train, test, gap, oaro, leak;
      for (const json& s : summaries) {
        const json& b = s.at("baselines").at(name);
        train.push_back(b.at("train_accuracy").get<double>());
        test.push_back(b.at("test_accuracy").get<double>());
        gap.push_back(b.at("accuracy_gap").get<double>());
        oaro.push_back(b.at("oaro_bound").get<double>());
        leak.push_back(b.at("leakage").get<double>());
      }
      BaselineRow row;
      row.kind = absl::StrCat("baseline_", name);
      row.train_accuracy = Summarize(train).mean;
      row.test_accuracy = Summarize(test).mean;
      row.accuracy_gap = Summarize(gap).mean;
      row.oaro_bound = Summarize(oaro).mean;
      const Stats l = Summarize(leak);
      row.leakage_mean = l.mean;
      row.leakage_std = l.stddev;
      row.repetitions_completed = l.count;
      report.baselines.push_back(row);
    }
    const double baseline_leakage =
        std::clamp(report.baselines.back().leakage_mean, 0.0, 1.0);

    for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
      const MechanismKind mechanism = config.mechanisms[m];
      for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
        const std::size_t index = m * config.epsilons.size() + e;
        std::vector<double> loss, leak, clamped;
        DpRow row;
        row.mechanism = mechanism;
        row.epsilon = config.epsilons[e];
        row.epsilon_per_query =
            config.queries_per_budget > 0
                ? PerQueryBudget(row.epsilon, config.queries_per_budget,
                                 mechanism)
                : row.epsilon;
        for (const json& s : summaries) {
          const json& c = s.at("cells").at(index);
          loss.push_back(c.at("accuracy_loss").get<double>());
          const double l = c.at("leakage").get<double>();
          leak.push_back(l);
          clamped.push_back(std::clamp(l, 0.0, 1.0));
        }
        const Stats ls = Summarize(loss);
        const Stats lk = Summarize(leak);
        row.accuracy_loss_mean = ls.mean;
        row.accuracy_loss_std = ls.stddev;
        row.leakage_mean = lk.mean;
        row.leakage_std = lk.stddev;
        row.leakage_clamped_mean = Summarize(clamped).mean;
        row.theoretical_leakage_bound =
            TheoreticalLeakageBound(row.epsilon_per_query, baseline_leakage);
        row.repetitions_completed = ls.count;
        report.dp_rows.push_back(row);
      }
    }
  } catch (const json::exception& e) {
    return absl::DataLossError(
        absl::StrCat("malformed repetition summary: ", e.what()));
  }
  return report;
}

std::string ReportCsvHeader() {
  return "kind,mechanism,epsilon,epsilon_per_query,train_accuracy,"
         "test_accuracy,accuracy_gap,oaro_bound,accuracy_loss_mean,"
         "accuracy_loss_std,leakage_mean,leakage_std,leakage_clamped_mean,"
         "theoretical_leakage_bound,repetitions_completed,status";
}

std::string FormatReportCsv(const ExperimentReport& report) {
  std::string out = ReportCsvHeader() + "\n";
  auto status = [&report](int completed) {
    return completed == report.repetitions ? "complete" : "incomplete";
  };
  for (const BaselineRow& b : report.baselines) {
    absl::StrAppend(&out, b.kind, ",,,,", FormatFixed6(b.train_accuracy), ",",
                    FormatFixed6(b.test_accuracy), ",",
                    FormatFixed6(b.accuracy_gap), ",",
                    FormatFixed6(b.oaro_bound), ",,,",
                    FormatFixed6(b.leakage_mean), ",",
                    FormatFixed6(b.leakage_std), ",",
                    FormatFixed6(std::clamp(b.leakage_mean, 0.0, 1.0)), ",,",
                    b.repetitions_completed, ",",
                    status(b.repetitions_completed), "\n");
  }
  for (const DpRow& r : report.dp_rows) {
    absl::StrAppend(&out, "dp,", MechanismName(r.mechanism), ",",
                    FormatFixed6(r.epsilon), ",",
                    FormatFixed6(r.epsilon_per_query), ",,,,,",
                    FormatFixed6(r.accuracy_loss_mean), ",",
                    FormatFixed6(r.accuracy_loss_std), ",",
                    FormatFixed6(r.leakage_mean), ",",
                    FormatFixed6(r.leakage_std), ",",
                    FormatFixed6(r.leakage_clamped_mean), ",",
                    FormatFixed6(r.theoretical_leakage_bound), ",",
                    r.repetitions_completed, ",",
                    status(r.repetitions_completed), "\n");
  }
  return out;
}

}  // namespace dpnn
