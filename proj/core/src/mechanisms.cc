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

#include "dpnn/mechanisms.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "absl/strings/str_cat.h"

namespace dpnn {

const char* MechanismName(MechanismKind kind) {
  return kind == MechanismKind::kLaplace ? "laplace" : "gaussian";
}

absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "laplace") return MechanismKind::kLaplace;
  if (lower == "gaussian") return MechanismKind::kGaussian;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", lower, "' (laplace|gaussian)"));
}

double SampleLaplace(double scale, RandomStream& rng) {
  // u in (-1/2, 1/2); x = -b sgn(u) ln(1 - 2|u|).
  const double u = rng.UniformOpen() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double SampleGaussian(double scale, RandomStream& rng) {
  return scale * rng.StandardNormal();
}

double SampleNoise(MechanismKind kind, double scale, RandomStream& rng) {
  return kind == MechanismKind::kLaplace ? SampleLaplace(scale, rng)
                                         : SampleGaussian(scale, rng);
}

absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    std::span<const double> scores, double sensitivity, double epsilon) {
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "exponential mechanism sensitivity must be positive, got ",
        sensitivity));
  }
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be non-negative");
  }
  if (scores.empty()) return absl::InvalidArgumentError("no candidates");
  std::vector<double> weights(scores.size());
  const double factor = epsilon / (2.0 * sensitivity);
  double shift = factor * scores[0];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InternalError("non-finite exponential mechanism score");
    }
    weights[i] = factor * scores[i];
    shift = std::max(shift, weights[i]);
  }
  double total = 0.0;
  for (double& w : weights) {
    w = std::exp(w - shift);
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

absl::StatusOr<std::size_t> ExponentialMechanismSample(
    std::span<const double> scores, double sensitivity, double epsilon,
    RandomStream& rng) {
  auto probabilities =
      ExponentialMechanismProbabilities(scores, sensitivity, epsilon);
  if (!probabilities.ok()) return probabilities.status();
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities->size(); ++i) {
    cumulative += (*probabilities)[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just below 1.
  for (std::size_t i = probabilities->size(); i-- > 0;) {
    if ((*probabilities)[i] > 0.0) return i;
  }
  return probabilities->size() - 1;
}

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double DeltaOfEpsilon(double epsilon) {
  return StandardNormalCdf(-1.0 + epsilon / 2.0) -
         std::exp(epsilon) * StandardNormalCdf(-1.0 - epsilon / 2.0);
}

absl::StatusOr<double> ComposeGdp(std::span<const double> epsilons) {
  if (epsilons.empty()) {
    return absl::InvalidArgumentError("GDP composition of an empty list");
  }
  double total = 0.0;
  for (double e : epsilons) {
    if (!(e > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("GDP parameters must be positive, got ", e));
    }
    total += e * e;
  }
  return std::sqrt(total);
}

}  // namespace dpnn
