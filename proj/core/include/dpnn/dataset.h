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

#ifndef DPNN_DATASET_H_
#define DPNN_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpnn {

// Row-major feature matrix with integer class labels in [0, class_count).
// `row_ids` identify rows across subsets so that disjointness between
// training, test and shadow splits can be audited.
struct LabeledDataset {
  std::string name;
  std::size_t feature_count = 0;
  int class_count = 0;
  std::vector<double> features;
  std::vector<int> labels;
  std::vector<int64_t> row_ids;

  std::size_t rows() const { return labels.size(); }
  std::span<const double> Row(std::size_t i) const {
    return {features.data() + i * feature_count, feature_count};
  }

  // No NaN/Inf features, labels within range, consistent sizes.
  absl::Status Validate() const;

  // Rows at `indices`, in that order.
  LabeledDataset Subset(std::span<const std::size_t> indices) const;

  double MaxAbsFeature() const;
};

struct CsvFormat {
  std::string label_column = "label";
  // Column holding row identifiers; when absent, ids are 0-based line order.
  std::string id_column = "id";
  // When set, labels >= class_count are rejected. Otherwise inferred as
  // max label + 1.
  std::optional<int> class_count;
  // Labels are optional (for query files); missing labels become -1.
  bool require_labels = true;
};

// Reads a CSV with a header line. Every non-label, non-id column is a
// numeric feature. Errors name the offending line (1-based).
absl::StatusOr<LabeledDataset> LoadCsv(const std::string& path,
                                       const CsvFormat& format = {});
absl::StatusOr<LabeledDataset> ParseCsv(const std::string& text,
                                        const CsvFormat& format = {});

// Writes features as f0..f{m-1} plus `id` and `label` columns.
absl::Status WriteCsv(const LabeledDataset& data, const std::string& path);

// Per-feature min-max scaling onto [-1, 1]. Constant features map to 0.
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxScaler Fit(const LabeledDataset& data);
  void Apply(LabeledDataset& data) const;
  void Apply(std::span<double> row) const;
};

struct SyntheticSpec {
  int classes = 2;
  std::size_t rows = 100;
  std::size_t features = 2;
  // Standard deviation of the class centres relative to the unit
  // within-class noise. Larger means easier to separate.
  double separation = 1.0;
  uint64_t seed = 0;
};

// Gaussian blobs, one per class, with balanced labels in shuffled order.
// Features are min-max scaled to [-1, 1] over the generated set.
absl::StatusOr<LabeledDataset> MakeSynthetic(const SyntheticSpec& spec);

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
  LabeledDataset rest;
};

// Shuffles row order with `seed`, then takes `train_rows` and `test_rows`
// disjoint rows; remaining rows go to `rest`.
absl::StatusOr<DatasetSplit> SplitDataset(const LabeledDataset& data,
                                          std::size_t train_rows,
                                          std::size_t test_rows,
                                          uint64_t seed);

}  // namespace dpnn

#endif  // DPNN_DATASET_H_
