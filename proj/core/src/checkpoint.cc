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

#include "dpnn/checkpoint.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace dpnn {
namespace {

using nlohmann::json;

constexpr char kFormat[] = "dpnn-checkpoint";
constexpr int kVersion = 1;

const char* LossName(LossKind kind) {
  return kind == LossKind::kCrossEntropy ? "cross_entropy"
                                         : "convexified_cross_entropy";
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& checkpoint) {
  const TrainedModel& m = checkpoint.model;
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["topology"] = {{"layer_widths", m.topology.widths()},
                     {"hidden_activation", "tanh"},
                     {"output_activation", "softmax"},
                     {"weight_count", m.topology.weight_count()}};
  doc["weights"] = m.params.weights;
  json training = {{"learning_rate", m.config.learning_rate},
                   {"batch_size", m.config.batch_size},
                   {"epochs", m.config.epochs},
                   {"l2_coefficient", m.config.l2_coefficient},
                   {"alpha", m.config.alpha},
                   {"loss", LossName(m.config.loss_kind)},
                   {"seed", m.config.seed},
                   {"training_rows", m.training_rows},
                   {"train_accuracy", m.report.train_accuracy},
                   {"final_objective", m.report.final_objective}};
  training["test_accuracy"] = m.report.test_accuracy
                                  ? json(*m.report.test_accuracy)
                                  : json(nullptr);
  doc["training"] = training;
  doc["layer_maxima"] = m.report.layer_maxima;
  if (checkpoint.scaler) {
    doc["scaler"] = {{"min", checkpoint.scaler->min},
                     {"max", checkpoint.scaler->max}};
  }
  return doc.dump(1) + "\n";
}

absl::StatusOr<Checkpoint> ParseCheckpoint(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("checkpoint is not valid JSON");
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      return absl::InvalidArgumentError("not a dpnn checkpoint");
    }
    if (doc.at("version").get<int>() != kVersion) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unsupported checkpoint version ", doc.at("version").dump()));
    }
    auto topology = NetworkTopology::Create(
        doc.at("topology").at("layer_widths").get<std::vector<int>>());
    if (!topology.ok()) return topology.status();

    const json& training = doc.at("training");
    TrainingConfig config;
    config.learning_rate = training.at("learning_rate").get<double>();
    config.batch_size = training.at("batch_size").get<int>();
    config.epochs = training.at("epochs").get<int>();
    config.l2_coefficient = training.at("l2_coefficient").get<double>();
    config.alpha = training.at("alpha").get<double>();
    const std::string loss = training.at("loss").get<std::string>();
    if (loss == "cross_entropy") {
      config.loss_kind = LossKind::kCrossEntropy;
    } else if (loss == "convexified_cross_entropy") {
      config.loss_kind = LossKind::kConvexifiedCrossEntropy;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown loss '", loss, "' in checkpoint"));
    }
    config.seed = training.at("seed").get<uint64_t>();

    Checkpoint checkpoint{
        TrainedModel{*topology,
                     ModelParams{doc.at("weights").get<std::vector<double>>()},
                     config,
                     {},
                     training.at("training_rows").get<std::size_t>()},
        std::nullopt};
    TrainingReport& report = checkpoint.model.report;
    report.train_accuracy = training.at("train_accuracy").get<double>();
    report.final_objective = training.at("final_objective").get<double>();
    if (!training.at("test_accuracy").is_null()) {
      report.test_accuracy = training.at("test_accuracy").get<double>();
    }
    report.layer_maxima = doc.at("layer_maxima").get<std::vector<double>>();
    if (doc.contains("scaler")) {
      checkpoint.scaler = MinMaxScaler{
          doc["scaler"].at("min").get<std::vector<double>>(),
          doc["scaler"].at("max").get<std::vector<double>>()};
    }

    const ModelParams& params = checkpoint.model.params;
    if (params.weights.size() != topology->weight_count()) {
      return absl::InvalidArgumentError(
          absl::StrCat("checkpoint holds ", params.weights.size(),
                       " weights, topology needs ", topology->weight_count()));
    }
    if (!params.AllFinite()) {
      return absl::InvalidArgumentError("checkpoint has non-finite weights");
    }
    if (!report.layer_maxima.empty() &&
        report.layer_maxima.size() !=
            static_cast<std::size_t>(topology->edge_layers())) {
      return absl::InvalidArgumentError(
          "layer_maxima must have one entry per layer below the output");
    }
    return checkpoint;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed checkpoint: ", e.what()));
  }
}

absl::Status SaveCheckpoint(const Checkpoint& checkpoint,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << SerializeCheckpoint(checkpoint);
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto checkpoint = ParseCheckpoint(buffer.str());
  if (!checkpoint.ok()) {
    return absl::Status(checkpoint.status().code(),
                        absl::StrCat(path, ": ",
                                     checkpoint.status().message()));
  }
  return checkpoint;
}

}  // namespace dpnn
