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

#include "dpnn/sensitivity.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace dpnn {

absl::StatusOr<double> LipschitzBound(std::span<const int> neuron_counts,
                                      int class_count,
                                      std::span<const double> layer_maxima) {
  if (class_count < 2) {
    return absl::InvalidArgumentError("class count must be at least 2");
  }
  if (neuron_counts.empty()) {
    return absl::InvalidArgumentError("need at least one layer below output");
  }
  if (layer_maxima.size() != neuron_counts.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", neuron_counts.size(),
                     " layer maxima (one per layer below the output), got ",
                     layer_maxima.size()));
  }
  double product = 1.0;
  for (std::size_t t = 0; t < neuron_counts.size(); ++t) {
    if (neuron_counts[t] < 1) {
      return absl::InvalidArgumentError("neuron counts must be positive");
    }
    if (!(layer_maxima[t] >= 0.0) || !std::isfinite(layer_maxima[t])) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer maximum x_", t, " must be finite and >= 0"));
    }
    product *= std::sqrt(static_cast<double>(neuron_counts[t])) *
               layer_maxima[t];
  }
  const double c = static_cast<double>(class_count);
  return (c - 1.0) * product / (c * neuron_counts.back());
}

absl::StatusOr<double> LipschitzBound(const NetworkTopology& topology,
                                      std::span<const double> layer_maxima) {
  std::vector<int> counts;
  for (int t = 0; t < topology.edge_layers(); ++t) {
    counts.push_back(topology.NeuronCount(t));
  }
  return LipschitzBound(counts, topology.class_count(), layer_maxima);
}

double WeightVectorSensitivity(double rho, double lambda, std::size_t n) {
  return 2.0 * rho / (lambda * static_cast<double>(n));
}

double WeightSensitivity(double delta2_w, std::size_t total_weights) {
  return delta2_w / std::sqrt(static_cast<double>(total_weights));
}

double OutputNeuronSensitivity(double activation_bound,
                               std::size_t fan_in_output,
                               double delta_omega) {
  return activation_bound * static_cast<double>(fan_in_output) * delta_omega;
}

ProbabilitySensitivity SoftmaxProbabilitySensitivity(double delta_z) {
  ProbabilitySensitivity out;
  out.raw = std::expm1(2.0 * delta_z);
  out.clipped = std::min(out.raw, 1.0);
  return out;
}

double OaroBound(double rho, double lambda, std::size_t n) {
  return 2.0 * rho * rho / (lambda * static_cast<double>(n));
}

SensitivityInputs SensitivityInputs::ForTopology(
    const NetworkTopology& topology, double rho, std::size_t n,
    double l2_coefficient) {
  SensitivityInputs in;
  in.rho = rho;
  in.lambda = StrongConvexityFromL2(l2_coefficient);
  in.n = n;
  in.total_weights = topology.weight_count();
  in.fan_in_output = static_cast<std::size_t>(
      topology.NeuronCount(topology.edge_layers() - 1));
  in.activation_bound = 1.0;
  return in;
}

absl::Status SensitivityInputs::Validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Lipschitz constant must be positive, got ", rho));
  }
  if (!(lambda > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("strong-convexity constant must be positive, got ",
                     lambda, " (is the L2 coefficient zero?)"));
  }
  if (n == 0) return absl::InvalidArgumentError("training-set size is zero");
  if (total_weights == 0 || fan_in_output == 0) {
    return absl::InvalidArgumentError("weight counts must be positive");
  }
  if (fan_in_output > total_weights) {
    return absl::InvalidArgumentError(
        "output fan-in cannot exceed the total weight count");
  }
  if (!(activation_bound > 0.0)) {
    return absl::InvalidArgumentError("activation bound must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<SensitivityReport> ComputeSensitivity(
    const SensitivityInputs& in) {
  if (auto s = in.Validate(); !s.ok()) return s;
  SensitivityReport r;
  r.rho = in.rho;
  r.lambda = in.lambda;
  r.n = in.n;
  r.total_weights = in.total_weights;
  r.fan_in_output = in.fan_in_output;
  r.activation_bound = in.activation_bound;
  r.delta2_w = WeightVectorSensitivity(in.rho, in.lambda, in.n);
  r.delta_omega = WeightSensitivity(r.delta2_w, in.total_weights);
  r.delta_z =
      OutputNeuronSensitivity(in.activation_bound, in.fan_in_output,
                              r.delta_omega);
  const ProbabilitySensitivity p = SoftmaxProbabilitySensitivity(r.delta_z);
  r.delta_p = p.clipped;
  r.delta_p_raw = p.raw;
  r.oaro_bound = OaroBound(in.rho, in.lambda, in.n);
  r.degenerate = !(r.delta_z > 0.0) || !(r.delta_p > 0.0);
  return r;
}

absl::StatusOr<SensitivityReport> ReportForModel(
    const NetworkTopology& topology, std::span<const double> layer_maxima,
    std::size_t n, double l2_coefficient) {
  if (layer_maxima.empty()) {
    return absl::FailedPreconditionError(
        "model has no recorded layer maxima; retrain or supply x_t");
  }
  auto rho = LipschitzBound(topology, layer_maxima);
  if (!rho.ok()) return rho.status();
  auto report = ComputeSensitivity(
      SensitivityInputs::ForTopology(topology, *rho, n, l2_coefficient));
  if (!report.ok()) return report.status();
  report->layer_maxima.assign(layer_maxima.begin(), layer_maxima.end());
  return report;
}

std::string ToKeyValueText(const SensitivityReport& r) {
  std::string out;
  auto line = [&out](const char* key, const auto& value) {
    absl::StrAppend(&out, key, "=", value, "\n");
  };
  auto real = [](double v) { return nlohmann::json(v).dump(); };
  line("rho", real(r.rho));
  line("lambda", real(r.lambda));
  line("n", r.n);
  line("total_weights", r.total_weights);
  line("fan_in_output", r.fan_in_output);
  line("activation_bound", real(r.activation_bound));
  line("delta2_w", real(r.delta2_w));
  line("delta_omega", real(r.delta_omega));
  line("delta_z", real(r.delta_z));
  line("delta_p", real(r.delta_p));
  line("delta_p_raw", real(r.delta_p_raw));
  line("oaro_bound", real(r.oaro_bound));
  line("degenerate", r.degenerate ? "true" : "false");
  return out;
}

std::string ToJson(const SensitivityReport& r) {
  nlohmann::json doc = {{"rho", r.rho},
                        {"lambda", r.lambda},
                        {"n", r.n},
                        {"total_weights", r.total_weights},
                        {"fan_in_output", r.fan_in_output},
                        {"activation_bound", r.activation_bound},
                        {"layer_maxima", r.layer_maxima},
                        {"delta2_w", r.delta2_w},
                        {"delta_omega", r.delta_omega},
                        {"delta_z", r.delta_z},
                        {"delta_p", r.delta_p},
                        {"delta_p_raw", r.delta_p_raw},
                        {"oaro_bound", r.oaro_bound},
                        {"degenerate", r.degenerate}};
  return doc.dump(1) + "\n";
}

absl::StatusOr<SensitivityReport> SensitivityReportFromJson(
    const std::string& text) {
  nlohmann::json doc =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("sensitivity report is not valid JSON");
  }
  try {
    SensitivityReport r;
    r.rho = doc.at("rho").get<double>();
    r.lambda = doc.at("lambda").get<double>();
    r.n = doc.at("n").get<std::size_t>();
    r.total_weights = doc.at("total_weights").get<std::size_t>();
    r.fan_in_output = doc.at("fan_in_output").get<std::size_t>();
    r.activation_bound = doc.at("activation_bound").get<double>();
    r.layer_maxima = doc.value("layer_maxima", std::vector<double>{});
    r.delta2_w = doc.at("delta2_w").get<double>();
    r.delta_omega = doc.at("delta_omega").get<double>();
    r.delta_z = doc.at("delta_z").get<double>();
    r.delta_p = doc.at("delta_p").get<double>();
    r.delta_p_raw = doc.at("delta_p_raw").get<double>();
    r.oaro_bound = doc.at("oaro_bound").get<double>();
    r.degenerate = doc.at("degenerate").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed sensitivity report: ", e.what()));
  }
}

}  // namespace dpnn
