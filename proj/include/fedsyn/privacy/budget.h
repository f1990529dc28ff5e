// Copyright 2026 The Fedsyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSYN_PRIVACY_BUDGET_H_
#define FEDSYN_PRIVACY_BUDGET_H_

#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace fedsyn::privacy {

// Largest rho with rho + 2 sqrt(rho ln(1/delta)) = eps.
double EpsDeltaToRho(double eps, double delta);
// The zCDP -> (eps, delta) conversion itself.
double RhoToEps(double rho, double delta);

// Split of a total zCDP budget: q*rho for the stage-1 one-way marginals, q*rho
// for the stage-1 projected two-way marginals and the remaining (1 - 2q)*rho
// for the selected marginals released in stage 2.
struct BudgetPlan {
  double rho_total = 0.0;
  double q = 0.0;
  double rho_1 = 0.0;
  double rho_2 = 0.0;
  double rho_3 = 0.0;
  double assumed_selected_fraction = 1.0 / 3.0;
  // ceil(assumed_selected_fraction * d(d-1)/2), at least one.
  int assumed_selected_count = 1;
  // rho_3 / assumed_selected_count: the cost of one adaptive stage-2 share.
  double per_marginal_rho = 0.0;

  static BudgetPlan Allocate(double rho, double q, int d,
                             double assumed_selected_fraction = 1.0 / 3.0);

  nlohmann::json ToJson() const;
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Additive zCDP ledger. Spend() is an atomic check-then-spend: a request that
// would push the total past rho_total is rejected and nothing is recorded.
class Accountant {
 public:
  struct Entry {
    std::string phase;
    double rho_spent = 0.0;
    double sigma_used = 0.0;
  };

  explicit Accountant(BudgetPlan plan) : plan_(std::move(plan)) {}

  const BudgetPlan& plan() const { return plan_; }

  // Throws BudgetExceededError.
  void Spend(const std::string& phase, double rho, double sigma_used);
  // Returns false instead of throwing.
  bool TrySpend(const std::string& phase, double rho, double sigma_used);

  double spent() const;
  double remaining() const;
  std::vector<Entry> entries() const;

  // [{"phase", "rho_spent", "sigma_used"}, ...]
  nlohmann::json ToJson() const;

 private:
  bool SpendLocked(const std::string& phase, double rho, double sigma_used);

  BudgetPlan plan_;
  mutable std::mutex mu_;
  double spent_ = 0.0;
  std::vector<Entry> entries_;
};

}  // namespace fedsyn::privacy

#endif  // FEDSYN_PRIVACY_BUDGET_H_
