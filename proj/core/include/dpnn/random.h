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

#ifndef DPNN_RANDOM_H_
#define DPNN_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace dpnn {

// Derives an independent 64-bit seed from a master seed, a repetition index
// and a stage name. Stable across platforms and runs.
uint64_t DeriveSeed(uint64_t master_seed, uint64_t index,
                    std::string_view stage);

// A seeded random stream. Every draw is a pure function of the seed and the
// number of previous draws, so two streams built from the same seed produce
// identical sequences. Not thread-safe; callers own their streams.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on (0, 1).
  double UniformOpen();
  // Uniform integer in [0, bound). `bound` must be positive.
  std::size_t UniformIndex(std::size_t bound);
  // Standard normal draw (Box-Muller; the second value of each pair is kept
  // for the next call).
  double StandardNormal();

  uint64_t NextBits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// Fisher-Yates shuffle driven by `rng`; deterministic for a given stream.
template <typename It>
void Shuffle(It first, It last, RandomStream& rng) {
  const auto n = static_cast<std::size_t>(last - first);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.UniformIndex(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace dpnn

#endif  // DPNN_RANDOM_H_
