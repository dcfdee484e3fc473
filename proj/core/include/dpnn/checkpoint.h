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

#ifndef DPNN_CHECKPOINT_H_
#define DPNN_CHECKPOINT_H_

#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/dataset.h"
#include "dpnn/trainer.h"

namespace dpnn {

// A trained model plus the feature scaling it was trained under, if any.
struct Checkpoint {
  TrainedModel model;
  std::optional<MinMaxScaler> scaler;
};

// JSON text. Weights are written in shortest round-trip decimal form, so
// loading restores every double bit-for-bit.
std::string SerializeCheckpoint(const Checkpoint& checkpoint);
absl::StatusOr<Checkpoint> ParseCheckpoint(const std::string& text);

absl::Status SaveCheckpoint(const Checkpoint& checkpoint,
                            const std::string& path);
absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& path);

}  // namespace dpnn

#endif  // DPNN_CHECKPOINT_H_
