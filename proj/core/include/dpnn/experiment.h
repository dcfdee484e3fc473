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

#ifndef DPNN_EXPERIMENT_H_
#define DPNN_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/dataset.h"
#include "dpnn/mechanisms.h"
#include "dpnn/trainer.h"

namespace dpnn {

// One privacy-utility experiment: per repetition, split the data into
// equal-size disjoint training and test sets (the rest feeds the shadow
// models), train plain and convexified baselines, compute sensitivities,
// run DP prediction over the epsilon grid and attack every target.
struct ExperimentConfig {
  // CSV input; when empty the synthetic spec is generated instead.
  std::string dataset_path;
  std::string label_column = "label";
  // Min-max scale CSV features to [-1, 1] (fit on each training split).
  bool normalize = true;
  SyntheticSpec synthetic;

  // Target training-set size n; the test set has the same size.
  std::size_t train_rows = 0;
  std::vector<int> hidden_widths = {128};
  // Hyper-parameters shared by the targets and the shadow models. The
  // loss kind is ignored: both losses are trained, and the convexified
  // model is the DP target.
  TrainingConfig training;

  std::vector<double> epsilons;
  std::vector<MechanismKind> mechanisms;
  // 0: grid values are per-query budgets. Otherwise each grid value is a
  // total budget spread over this many queries.
  std::size_t queries_per_budget = 0;

  std::size_t shadow_count = 10;
  int attack_hidden_width = 64;
  double attack_learning_rate = 0.01;
  double attack_l2_coefficient = 1e-6;
  int attack_epochs = 100;

  int repetitions = 1;
  std::string output_dir;
  uint64_t master_seed = 0;

  absl::Status Validate() const;
  // Every field that affects results (not output_dir or repetitions).
  std::string FingerprintJson() const;
};

struct BaselineRow {
  std::string kind;  // "baseline_plain" or "baseline_convexified"
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double accuracy_gap = 0.0;
  double oaro_bound = 0.0;
  double leakage_mean = 0.0;
  double leakage_std = 0.0;
  int repetitions_completed = 0;
};

struct DpRow {
  MechanismKind mechanism = MechanismKind::kGaussian;
  double epsilon = 0.0;
  double epsilon_per_query = 0.0;
  double accuracy_loss_mean = 0.0;
  double accuracy_loss_std = 0.0;
  double leakage_mean = 0.0;
  double leakage_std = 0.0;
  double leakage_clamped_mean = 0.0;
  double theoretical_leakage_bound = 0.0;
  int repetitions_completed = 0;
};

struct ExperimentReport {
  int repetitions = 0;
  std::vector<BaselineRow> baselines;
  std::vector<DpRow> dp_rows;
  // One entry per failed repetition: "rep <i>: <status>".
  std::vector<std::string> failures;

  std::size_t row_count() const { return baselines.size() + dp_rows.size(); }
};

// min(e^epsilon - 1, baseline_leakage).
double TheoreticalLeakageBound(double epsilon, double baseline_leakage);

// Runs (or resumes) every repetition and writes report.csv,
// run_metadata.json and per-repetition artifacts under output_dir.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

// Re-assembles the report from the per-repetition summaries on disk.
absl::StatusOr<ExperimentReport> AssembleReport(const ExperimentConfig& config);

// CSV, six decimals per real value. Incomplete cells are flagged in the
// status column.
std::string FormatReportCsv(const ExperimentReport& report);

// Header line of FormatReportCsv.
std::string ReportCsvHeader();

std::string RepetitionDir(const std::string& output_dir, int repetition);

}  // namespace dpnn

#endif  // DPNN_EXPERIMENT_H_
