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

#ifndef DPNN_BUDGET_H_
#define DPNN_BUDGET_H_

#include <cstddef>
#include <mutex>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpnn/mechanisms.h"

namespace dpnn {

struct BudgetSplit {
  double sampling = 0.0;
  double neuron = 0.0;
};

// Per-query split between neuron sampling and noise injection.
//   Laplace:  eps / (2C + 1)       (sequential composition)
//   Gaussian: eps / sqrt(4C + 1)   (GDP composition)
BudgetSplit SplitBudget(double epsilon_per_query, int class_count,
                        MechanismKind mechanism);

// Fixed pre-allocation of a total budget over `query_count` queries:
// eps_total / Q for Laplace, eps_total / sqrt(Q) for Gaussian.
double PerQueryBudget(double epsilon_total, std::size_t query_count,
                      MechanismKind mechanism);

struct PrivacyBudget {
  double epsilon_total = 0.0;
  MechanismKind mechanism = MechanismKind::kLaplace;
  int class_count = 0;
  std::size_t queries_allowed = 0;
  double epsilon_per_query = 0.0;
  double epsilon_sampling = 0.0;
  double epsilon_neuron = 0.0;
  // Gaussian only: 1 / (10 n) for n training rows; 0 when n is unknown.
  double delta = 0.0;

  static absl::StatusOr<PrivacyBudget> Create(
      double epsilon_total, std::size_t queries_allowed, int class_count,
      MechanismKind mechanism, std::optional<std::size_t> training_rows = {});

  // Fixes the per-query epsilon directly; epsilon_total is its composition
  // over `queries_allowed` queries.
  static absl::StatusOr<PrivacyBudget> ForPerQuery(
      double epsilon_per_query, std::size_t queries_allowed, int class_count,
      MechanismKind mechanism, std::optional<std::size_t> training_rows = {});
};

// Counts answered queries against a fixed allowance. Charging is an atomic
// check-and-increment, so one ledger may back concurrent predictors.
class BudgetLedger {
 public:
  explicit BudgetLedger(PrivacyBudget budget) : budget_(budget) {}

  BudgetLedger(const BudgetLedger&) = delete;
  BudgetLedger& operator=(const BudgetLedger&) = delete;

  // Consumes one query. ResourceExhausted once the allowance is used up;
  // the message carries the remaining budget.
  absl::Status Charge();

  const PrivacyBudget& budget() const { return budget_; }
  std::size_t queries_answered() const;
  std::size_t queries_remaining() const;
  bool exhausted() const { return queries_remaining() == 0; }

 private:
  const PrivacyBudget budget_;
  mutable std::mutex mu_;
  std::size_t answered_ = 0;
};

}  // namespace dpnn

#endif  // DPNN_BUDGET_H_
