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

#include "fedsyn/privacy/budget.h"

#include <cmath>

namespace fedsyn::privacy {
namespace {

// Floating-point slack for sums of budget shares that add up to rho_total.
constexpr double kRelativeSlack = 1e-12;

}  // namespace

double EpsDeltaToRho(double eps, double delta) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double log_term = std::log(1.0 / delta);
  // Difference of square roots rewritten to avoid cancellation for small eps.
  const double root = eps / (std::sqrt(log_term + eps) + std::sqrt(log_term));
  return root * root;
}

double RhoToEps(double rho, double delta) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

BudgetPlan BudgetPlan::Allocate(double rho, double q, int d,
                                double assumed_selected_fraction) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(q > 0.0 && q < 1.0 / 3.0)) {
    throw std::invalid_argument("q must lie in (0, 1/3)");
  }
  if (!(assumed_selected_fraction > 0.0 && assumed_selected_fraction <= 1.0)) {
    throw std::invalid_argument("assumed_selected_fraction must lie in (0, 1]");
  }
  if (d < 2) throw std::invalid_argument("need at least two attributes");
  BudgetPlan plan;
  plan.rho_total = rho;
  plan.q = q;
  plan.rho_1 = q * rho;
  plan.rho_2 = q * rho;
  plan.rho_3 = rho - plan.rho_1 - plan.rho_2;
  plan.assumed_selected_fraction = assumed_selected_fraction;
  const double num_pairs = 0.5 * d * (d - 1);
  // The small offset keeps e.g. (1/3) * 105 from rounding up to 36.
  plan.assumed_selected_count = std::max(
      1, static_cast<int>(std::ceil(assumed_selected_fraction * num_pairs - 1e-9)));
  plan.per_marginal_rho = plan.rho_3 / plan.assumed_selected_count;
  return plan;
}

nlohmann::json BudgetPlan::ToJson() const {
  return {{"rho_total", rho_total},
          {"q", q},
          {"rho_1", rho_1},
          {"rho_2", rho_2},
          {"rho_3", rho_3},
          {"assumed_selected_fraction", assumed_selected_fraction},
          {"assumed_selected_count", assumed_selected_count},
          {"per_marginal_rho", per_marginal_rho}};
}

bool Accountant::SpendLocked(const std::string& phase, double rho,
                             double sigma_used) {
  if (!(rho >= 0.0)) throw std::invalid_argument("spend must be nonnegative");
  if (spent_ + rho > plan_.rho_total * (1.0 + kRelativeSlack)) return false;
  spent_ += rho;
  entries_.push_back({phase, rho, sigma_used});
  return true;
}

void Accountant::Spend(const std::string& phase, double rho, double sigma_used) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!SpendLocked(phase, rho, sigma_used)) {
    throw BudgetExceededError("privacy budget exceeded in phase '" + phase +
                              "': spent " + std::to_string(spent_) +
                              " + request " + std::to_string(rho) + " > " +
                              std::to_string(plan_.rho_total));
  }
}

bool Accountant::TrySpend(const std::string& phase, double rho,
                          double sigma_used) {
  std::lock_guard<std::mutex> lock(mu_);
  return SpendLocked(phase, rho, sigma_used);
}

double Accountant::spent() const {
  std::lock_guard<std::mutex> lock(mu_);
  return spent_;
}

double Accountant::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return plan_.rho_total - spent_;
}

std::vector<Accountant::Entry> Accountant::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

nlohmann::json Accountant::ToJson() const {
  std::lock_guard<std::mutex> lock(mu_);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries_) {
    out.push_back(
        {{"phase", e.phase}, {"rho_spent", e.rho_spent}, {"sigma_used", e.sigma_used}});
  }
  return out;
}

}  // namespace fedsyn::privacy
