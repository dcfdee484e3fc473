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
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dpnn/io.h"
#include "dpnn/sensitivity.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_support.h"

namespace dpnn {
namespace {

using ::testing::HasSubstr;
using nlohmann::json;

ExperimentConfig TinyConfig(const std::string& output_dir) {
  ExperimentConfig config;
  config.synthetic = {.classes = 3, .rows = 600, .features = 5,
                      .separation = 1.5, .seed = 11};
  config.train_rows = 100;
  config.hidden_widths = {8};
  config.training.learning_rate = 0.01;
  config.training.batch_size = 50;
  config.training.epochs = 10;
  config.epsilons = {0.1, 10.0};
  config.mechanisms = {MechanismKind::kLaplace, MechanismKind::kGaussian};
  config.shadow_count = 2;
  config.attack_hidden_width = 8;
  config.attack_epochs = 10;
  config.repetitions = 2;
  config.output_dir = output_dir;
  config.master_seed = 5;
  return config;
}

std::vector<std::vector<std::string>> ParseCsvCells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::MakeTempDir("experiment_test"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string dir_;
};

TEST(TheoreticalLeakageBoundTest, Examples) {
  EXPECT_NEAR(TheoreticalLeakageBound(0.01, 0.36), 0.0100501670841680575,
              1e-16);
  EXPECT_EQ(TheoreticalLeakageBound(1.0, 0.36), 0.36);
  EXPECT_NEAR(TheoreticalLeakageBound(1e-12, 0.36), 0.0, 1e-11);
}

TEST(ExperimentConfigTest, Validation) {
  ExperimentConfig config = TinyConfig("/tmp/unused");
  EXPECT_TRUE(config.Validate().ok());
  config.epsilons = {0.1, -1.0};
  EXPECT_FALSE(config.Validate().ok());
  config = TinyConfig("/tmp/unused");
  config.epsilons.clear();
  EXPECT_FALSE(config.Validate().ok());
  config = TinyConfig("/tmp/unused");
  config.repetitions = 0;
  EXPECT_FALSE(config.Validate().ok());
  config = TinyConfig("/tmp/unused");
  config.output_dir.clear();
  EXPECT_FALSE(config.Validate().ok());
}

TEST(ExperimentConfigTest, FingerprintIgnoresOutputLocation) {
  ExperimentConfig a = TinyConfig("/tmp/a");
  ExperimentConfig b = TinyConfig("/tmp/b");
  b.repetitions = 7;
  EXPECT_EQ(a.FingerprintJson(), b.FingerprintJson());
  b.master_seed = 6;
  EXPECT_NE(a.FingerprintJson(), b.FingerprintJson());
}

TEST_F(ExperimentTest, SmokeRunProducesFiniteReport) {
  ExperimentConfig config = TinyConfig(dir_);
  config.repetitions = 1;
  config.epsilons = {1.0};
  config.mechanisms = {MechanismKind::kLaplace};
  config.synthetic.classes = 2;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->failures.empty());
  EXPECT_EQ(report->dp_rows.size(), 1u);
  EXPECT_EQ(report->baselines.size(), 2u);
  EXPECT_EQ(report->row_count(), 3u);
  const DpRow& row = report->dp_rows[0];
  EXPECT_TRUE(std::isfinite(row.accuracy_loss_mean));
  EXPECT_TRUE(std::isfinite(row.leakage_mean));
  EXPECT_EQ(row.repetitions_completed, 1);
  for (const BaselineRow& b : report->baselines) {
    EXPECT_TRUE(std::isfinite(b.oaro_bound));
    EXPECT_GT(b.test_accuracy, 0.5);
  }
  for (const char* file :
       {"config.json", "run_metadata.json", "report.csv",
        "rep_000/summary.json", "rep_000/target_plain.json",
        "rep_000/target_convexified.json",
        "rep_000/sensitivity_convexified.json",
        "rep_000/sensitivity_convexified.txt",
        "rep_000/attack_baseline_plain.csv",
        "rep_000/attack_laplace_eps0.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ + "/" + file)) << file;
  }
}

TEST_F(ExperimentTest, PinnedSeedRerunIsByteIdentical) {
  const ExperimentConfig first = TinyConfig(dir_ + "/first");
  const ExperimentConfig second = TinyConfig(dir_ + "/second");
  ASSERT_TRUE(RunExperiment(first).ok());
  ASSERT_TRUE(RunExperiment(second).ok());
  auto a = ReadTextFile(first.output_dir + "/report.csv");
  auto b = ReadTextFile(second.output_dir + "/report.csv");
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
  for (const char* file :
       {"rep_001/summary.json", "rep_001/target_convexified.json",
        "rep_001/attack_gaussian_eps1.csv"}) {
    EXPECT_EQ(*ReadTextFile(first.output_dir + "/" + file),
              *ReadTextFile(second.output_dir + "/" + file))
        << file;
  }
}

TEST_F(ExperimentTest, ReportMatchesGoldenFile) {
  ASSERT_TRUE(RunExperiment(TinyConfig(dir_)).ok());
  auto actual = ReadTextFile(dir_ + "/report.csv");
  ASSERT_TRUE(actual.ok());
  const std::string golden_path =
      std::string(DPNN_TEST_DATA_DIR) + "/golden_report.csv";
  if (std::getenv("DPNN_UPDATE_GOLDEN") != nullptr) {
    ASSERT_TRUE(WriteTextFile(golden_path, *actual).ok());
  }
  auto golden = ReadTextFile(golden_path);
  ASSERT_TRUE(golden.ok()) << golden.status();
  EXPECT_EQ(*actual, *golden);
}

TEST_F(ExperimentTest, ReportSchema) {
  ASSERT_TRUE(RunExperiment(TinyConfig(dir_)).ok());
  const auto rows = ParseCsvCells(*ReadTextFile(dir_ + "/report.csv"));
  ASSERT_EQ(rows.size(), 1u + 2u + 4u);
  EXPECT_EQ(rows[0].size(), 16u);
  EXPECT_EQ(rows[0][0], "kind");
  EXPECT_EQ(rows[1][0], "baseline_plain");
  EXPECT_EQ(rows[2][0], "baseline_convexified");
  const std::vector<std::string> mechanisms = {"laplace", "laplace",
                                               "gaussian", "gaussian"};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ASSERT_EQ(rows[r].size(), 16u) << r;
    EXPECT_EQ(rows[r][15], "complete");
    EXPECT_EQ(rows[r][14], "2");
  }
  for (std::size_t r = 3; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][0], "dp");
    EXPECT_EQ(rows[r][1], mechanisms[r - 3]);
    EXPECT_EQ(rows[r][2], r % 2 == 1 ? "0.100000" : "10.000000");
  }
}

TEST_F(ExperimentTest, CellsAreReproducibleFromArtifacts) {
  const ExperimentConfig config = TinyConfig(dir_);
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok());

  // Leakage of the gaussian eps=10 cell from the per-sample dumps.
  std::vector<double> leakages;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    auto dump = ReadTextFile(RepetitionDir(dir_, rep) +
                             "/attack_gaussian_eps1.csv");
    ASSERT_TRUE(dump.ok());
    const auto rows = ParseCsvCells(*dump);
    double tp = 0, p = 0, fp = 0, n = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const bool member = rows[i][1] == "1";
      const bool guess = rows[i][3] == "1";
      (member ? p : n) += 1;
      if (guess) (member ? tp : fp) += 1;
    }
    leakages.push_back(tp / p - fp / n);
  }
  const double mean = (leakages[0] + leakages[1]) / 2.0;
  EXPECT_EQ(report->dp_rows[3].leakage_mean, mean);

  // Baseline OARO column from the stored sensitivity reports.
  double oaro = 0.0;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    auto text = ReadTextFile(RepetitionDir(dir_, rep) +
                             "/sensitivity_convexified.json");
    ASSERT_TRUE(text.ok());
    auto stored = SensitivityReportFromJson(*text);
    ASSERT_TRUE(stored.ok());
    const double recomputed = 2.0 * stored->rho * stored->rho /
                              (stored->lambda * static_cast<double>(stored->n));
    EXPECT_EQ(stored->oaro_bound, recomputed);
    EXPECT_EQ(stored->lambda, config.training.l2_coefficient / 2.0);
    EXPECT_EQ(stored->n, config.train_rows);
    oaro += recomputed;
  }
  EXPECT_EQ(report->baselines[1].oaro_bound, oaro / 2.0);

  // Theoretical bound column.
  const double baseline = std::clamp(report->baselines[1].leakage_mean, 0.0,
                                     1.0);
  for (const DpRow& row : report->dp_rows) {
    EXPECT_EQ(row.theoretical_leakage_bound,
              std::min(std::expm1(row.epsilon_per_query), baseline));
  }
}

TEST_F(ExperimentTest, ResumesCompletedRepetitions) {
  const ExperimentConfig config = TinyConfig(dir_);
  ASSERT_TRUE(RunExperiment(config).ok());
  const std::string original = *ReadTextFile(dir_ + "/report.csv");

  // Remove one repetition's checkpoint: it must not be needed on resume.
  std::filesystem::remove(RepetitionDir(dir_, 0) + "/target_plain.json");
  std::filesystem::remove(RepetitionDir(dir_, 1) + "/summary.json");
  ASSERT_TRUE(RunExperiment(config).ok());
  EXPECT_EQ(*ReadTextFile(dir_ + "/report.csv"), original);
  EXPECT_FALSE(
      std::filesystem::exists(RepetitionDir(dir_, 0) + "/target_plain.json"));
  EXPECT_TRUE(
      std::filesystem::exists(RepetitionDir(dir_, 1) + "/summary.json"));
  const json metadata = json::parse(*ReadTextFile(dir_ + "/run_metadata.json"));
  EXPECT_EQ(metadata["repetitions"][0]["status"], "resumed");
  EXPECT_EQ(metadata["repetitions"][1]["status"], "completed");
}

TEST_F(ExperimentTest, FailedRepetitionsMarkRowsIncomplete) {
  ExperimentConfig config = TinyConfig(dir_);
  // Too few rows for the shadow splits.
  config.synthetic.rows = 200;
  config.repetitions = 1;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->failures.size(), 1u);
  EXPECT_THAT(report->failures[0], HasSubstr("rep 0"));
  EXPECT_TRUE(
      std::filesystem::exists(RepetitionDir(dir_, 0) + "/error.txt"));
  const auto rows = ParseCsvCells(*ReadTextFile(dir_ + "/report.csv"));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][15], "incomplete");
  }
}

TEST_F(ExperimentTest, LoadsCsvDatasets) {
  auto data = MakeSynthetic({.classes = 2, .rows = 500, .features = 3,
                             .separation = 2.0, .seed = 3});
  ASSERT_TRUE(data.ok());
  for (double& v : data->features) v = 10.0 * v + 4.0;
  ASSERT_TRUE(WriteCsv(*data, dir_ + "/data.csv").ok());
  ExperimentConfig config = TinyConfig(dir_ + "/out");
  config.dataset_path = dir_ + "/data.csv";
  config.repetitions = 1;
  config.epsilons = {1.0};
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->failures.empty());
  // Normalisation is fitted on the training split, so the stored model
  // carries the scaler.
  const json checkpoint = json::parse(
      *ReadTextFile(RepetitionDir(config.output_dir, 0) +
                    "/target_convexified.json"));
  EXPECT_TRUE(checkpoint.contains("scaler"));
  EXPECT_GT(report->baselines[1].test_accuracy, 0.8);
}

}  // namespace
}  // namespace dpnn
