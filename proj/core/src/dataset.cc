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

#include "dpnn/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "absl/strings/str_cat.h"
#include "dpnn/random.h"

namespace dpnn {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
}

bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string FormatDouble(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

absl::Status LabeledDataset::Validate() const {
  if (features.size() != labels.size() * feature_count) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset '", name, "': feature matrix has ",
                     features.size(), " values, expected ",
                     labels.size() * feature_count));
  }
  if (!row_ids.empty() && row_ids.size() != labels.size()) {
    return absl::InvalidArgumentError("row id count does not match rows");
  }
  if (class_count < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset '", name, "': class count ", class_count,
                     " < 2"));
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset '", name, "': non-finite feature in row ",
                       i / std::max<std::size_t>(feature_count, 1)));
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset '", name, "': label ", labels[i], " in row ",
                       i, " outside [0, ", class_count, ")"));
    }
  }
  return absl::OkStatus();
}

LabeledDataset LabeledDataset::Subset(
    std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.name = name;
  out.feature_count = feature_count;
  out.class_count = class_count;
  out.features.reserve(indices.size() * feature_count);
  out.labels.reserve(indices.size());
  out.row_ids.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto row = Row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(labels[i]);
    out.row_ids.push_back(row_ids.empty() ? static_cast<int64_t>(i)
                                          : row_ids[i]);
  }
  return out;
}

double LabeledDataset::MaxAbsFeature() const {
  double best = 0.0;
  for (double v : features) best = std::max(best, std::abs(v));
  return best;
}

absl::StatusOr<LabeledDataset> ParseCsv(const std::string& text,
                                        const CsvFormat& format) {
  std::vector<std::string_view> lines = Split(text, '\n');
  std::size_t line_index = 0;
  while (line_index < lines.size() && Trim(lines[line_index]).empty()) {
    ++line_index;
  }
  if (line_index == lines.size()) {
    return absl::InvalidArgumentError("CSV is empty (no header line)");
  }
  std::vector<std::string_view> header =
      Split(Trim(lines[line_index]), ',');
  int label_col = -1;
  int id_col = -1;
  std::vector<int> feature_cols;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    const std::string_view name = Trim(header[c]);
    if (name == format.label_column) {
      label_col = c;
    } else if (name == format.id_column) {
      id_col = c;
    } else {
      feature_cols.push_back(c);
    }
  }
  if (label_col < 0 && format.require_labels) {
    return absl::InvalidArgumentError(absl::StrCat(
        "CSV header has no label column '", format.label_column, "'"));
  }
  if (feature_cols.empty()) {
    return absl::InvalidArgumentError("CSV header has no feature columns");
  }

  LabeledDataset data;
  data.feature_count = feature_cols.size();
  int max_label = -1;
  for (++line_index; line_index < lines.size(); ++line_index) {
    const std::string_view line = Trim(lines[line_index]);
    if (line.empty()) continue;
    const std::size_t line_number = line_index + 1;
    std::vector<std::string_view> cells = Split(line, ',');
    if (cells.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected ", header.size(),
                       " fields, found ", cells.size()));
    }
    for (int c : feature_cols) {
      double value;
      if (!ParseDouble(cells[c], value) || !std::isfinite(value)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": column '",
                         std::string(Trim(header[c])),
                         "' is not a finite number: '",
                         std::string(Trim(cells[c])), "'"));
      }
      data.features.push_back(value);
    }
    if (label_col >= 0) {
      const std::string_view cell = Trim(cells[label_col]);
      int label = 0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), label);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          cell.empty() || label < 0 ||
          (format.class_count && label >= *format.class_count)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": unknown label '", std::string(cell), "'"));
      }
      data.labels.push_back(label);
      max_label = std::max(max_label, label);
    } else {
      data.labels.push_back(-1);
    }
    if (id_col >= 0) {
      const std::string_view cell = Trim(cells[id_col]);
      int64_t id = 0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), id);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": malformed id '",
                         std::string(cell), "'"));
      }
      data.row_ids.push_back(id);
    } else {
      data.row_ids.push_back(static_cast<int64_t>(data.labels.size() - 1));
    }
  }
  data.class_count = format.class_count.value_or(std::max(max_label + 1, 2));
  if (label_col >= 0) {
    if (data.rows() < 2) {
      return absl::InvalidArgumentError("CSV holds fewer than 2 rows");
    }
    if (auto status = data.Validate(); !status.ok()) return status;
  }
  return data;
}

absl::StatusOr<LabeledDataset> LoadCsv(const std::string& path,
                                       const CsvFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto data = ParseCsv(buffer.str(), format);
  if (!data.ok()) {
    return absl::Status(data.status().code(),
                        absl::StrCat(path, ": ", data.status().message()));
  }
  std::string_view stem = path;
  if (auto slash = stem.find_last_of('/'); slash != stem.npos) {
    stem.remove_prefix(slash + 1);
  }
  data->name = std::string(stem);
  return data;
}

absl::Status WriteCsv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << "id";
  for (std::size_t j = 0; j < data.feature_count; ++j) out << ",f" << j;
  out << ",label\n";
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << (data.row_ids.empty() ? static_cast<int64_t>(i) : data.row_ids[i]);
    for (double v : data.Row(i)) out << ',' << FormatDouble(v);
    out << ',' << data.labels[i] << '\n';
  }
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

MinMaxScaler MinMaxScaler::Fit(const LabeledDataset& data) {
  MinMaxScaler scaler;
  scaler.min.assign(data.feature_count, 0.0);
  scaler.max.assign(data.feature_count, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.Row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (i == 0 || row[j] < scaler.min[j]) scaler.min[j] = row[j];
      if (i == 0 || row[j] > scaler.max[j]) scaler.max[j] = row[j];
    }
  }
  return scaler;
}

void MinMaxScaler::Apply(std::span<double> row) const {
  for (std::size_t j = 0; j < row.size() && j < min.size(); ++j) {
    const double range = max[j] - min[j];
    row[j] = range > 0.0 ? 2.0 * (row[j] - min[j]) / range - 1.0 : 0.0;
  }
}

void MinMaxScaler::Apply(LabeledDataset& data) const {
  for (std::size_t i = 0; i < data.rows(); ++i) {
    Apply(std::span<double>(data.features.data() + i * data.feature_count,
                            data.feature_count));
  }
}

absl::StatusOr<LabeledDataset> MakeSynthetic(const SyntheticSpec& spec) {
  if (spec.classes < 2 || spec.rows < 2 || spec.features < 1) {
    return absl::InvalidArgumentError(
        "synthetic data needs >= 2 classes, >= 2 rows and >= 1 feature");
  }
  if (!(spec.separation >= 0.0)) {
    return absl::InvalidArgumentError("separation must be non-negative");
  }
  RandomStream rng(spec.seed);
  std::vector<double> centres(static_cast<std::size_t>(spec.classes) *
                              spec.features);
  for (double& c : centres) c = spec.separation * rng.StandardNormal();

  LabeledDataset data;
  data.name = absl::StrCat("synthetic-c", spec.classes, "-n", spec.rows, "-m",
                           spec.features);
  data.feature_count = spec.features;
  data.class_count = spec.classes;
  data.labels.resize(spec.rows);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    data.labels[i] = static_cast<int>(i % spec.classes);
  }
  Shuffle(data.labels.begin(), data.labels.end(), rng);
  data.features.resize(spec.rows * spec.features);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const double* centre = centres.data() + data.labels[i] * spec.features;
    for (std::size_t j = 0; j < spec.features; ++j) {
      data.features[i * spec.features + j] = centre[j] + rng.StandardNormal();
    }
  }
  data.row_ids.resize(spec.rows);
  std::iota(data.row_ids.begin(), data.row_ids.end(), int64_t{0});
  MinMaxScaler::Fit(data).Apply(data);
  return data;
}

absl::StatusOr<DatasetSplit> SplitDataset(const LabeledDataset& data,
                                          std::size_t train_rows,
                                          std::size_t test_rows,
                                          uint64_t seed) {
  if (train_rows + test_rows > data.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot split ", data.rows(), " rows into ", train_rows,
                     " training and ", test_rows, " test rows"));
  }
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream rng(seed);
  Shuffle(order.begin(), order.end(), rng);
  const std::span<const std::size_t> all(order);
  DatasetSplit split;
  split.train = data.Subset(all.subspan(0, train_rows));
  split.test = data.Subset(all.subspan(train_rows, test_rows));
  split.rest = data.Subset(all.subspan(train_rows + test_rows));
  return split;
}

}  // namespace dpnn
