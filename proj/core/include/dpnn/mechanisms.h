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

#ifndef DPNN_MECHANISMS_H_
#define DPNN_MECHANISMS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpnn/random.h"

namespace dpnn {

enum class MechanismKind { kLaplace, kGaussian };

const char* MechanismName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name);

// Laplace(0, scale) by inverse CDF from one uniform draw.
double SampleLaplace(double scale, RandomStream& rng);
// N(0, scale^2).
double SampleGaussian(double scale, RandomStream& rng);
double SampleNoise(MechanismKind kind, double scale, RandomStream& rng);

// Selection probabilities of the exponential mechanism,
//   Pr[v] proportional to exp(epsilon * score_v / (2 * sensitivity)),
// computed with the largest exponent shifted to zero.
absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    std::span<const double> scores, double sensitivity, double epsilon);

absl::StatusOr<std::size_t> ExponentialMechanismSample(
    std::span<const double> scores, double sensitivity, double epsilon,
    RandomStream& rng);

// Phi(x), via erfc.
double StandardNormalCdf(double x);

// delta(eps) = Phi(-1 + eps/2) - e^eps Phi(-1 - eps/2): the (eps, delta)-DP
// curve of 1-GDP.
double DeltaOfEpsilon(double epsilon);

// n-fold composition of eps_i-GDP is sqrt(sum eps_i^2)-GDP.
absl::StatusOr<double> ComposeGdp(std::span<const double> epsilons);

}  // namespace dpnn

#endif  // DPNN_MECHANISMS_H_
