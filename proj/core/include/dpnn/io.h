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

#ifndef DPNN_IO_H_
#define DPNN_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpnn {

absl::Status WriteTextFile(const std::string& path, const std::string& text);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);

// Fixed-point with six decimals, as used in every report table.
std::string FormatFixed6(double value);

}  // namespace dpnn

#endif  // DPNN_IO_H_
