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

#include "fedsyn/server/protocol.h"

#include <cmath>
#include <stdexcept>

#include "spdlog/spdlog.h"

namespace fedsyn::server {

Coordinator::Coordinator(std::vector<data::LocalDataset> parts,
                         privacy::NoiseCalibration calibration,
                         marginals::ProjectionSet projections,
                         privacy::BudgetPlan plan, uint64_t master_seed)
    : calibration_(calibration),
      projections_(std::move(projections)),
      accountant_(std::move(plan)) {
  if (parts.empty()) throw std::invalid_argument("no participants");
  schema_ = parts.front().data.schema();
  for (auto& part : parts) {
    if (!(part.data.schema() == schema_)) {
      throw std::invalid_argument("participants must share one schema");
    }
    n_ += static_cast<int64_t>(part.data.num_rows());
    participants_.emplace_back(std::move(part), calibration_, master_seed);
  }
}

AggregatedView Coordinator::RunStage1(bool share_two_way) {
  const auto& plan = accountant_.plan();
  accountant_.Spend("stage1/one_way", plan.rho_1, calibration_.multiplier_1);
  if (share_two_way) {
    accountant_.Spend("stage1/two_way", plan.rho_2, calibration_.multiplier_2);
  }
  std::vector<client::Stage1Message> messages;
  messages.reserve(participants_.size());
  for (auto& p : participants_) {
    if (share_two_way) {
      messages.push_back(p.ShareStage1(projections_));
    } else {
      // One-way only: reuse the stage-1 path with two-way noise disabled and
      // discard the (noise-free, never released) projected part.
      auto msg = p.ShareStage1(projections_);
      for (auto& [pair, values] : msg.scaled_projected_two_way) {
        std::fill(values.begin(), values.end(), 0.0);
      }
      messages.push_back(std::move(msg));
    }
  }
  auto view = Aggregate(messages, schema_, calibration_, projections_);
  if (!share_two_way) {
    for (auto& [pair, v] : view.v2) v = 0.0;
  }
  return view;
}

std::vector<SelectedMarginal> Coordinator::RequestSelected(
    std::span<const marginals::Pair> pairs, double rho_each,
    const std::string& phase) {
  if (pairs.empty()) return {};
  if (!(rho_each > 0.0)) throw std::invalid_argument("rho_each must be positive");
  const double multiplier = Stage2Multiplier(rho_each);
  // Check-then-spend for the whole request before any noise is drawn.
  const double request = rho_each * static_cast<double>(pairs.size());
  if (accountant_.spent() + request >
      accountant_.plan().rho_total * (1.0 + 1e-12)) {
    throw privacy::BudgetExceededError("stage-2 request exceeds the budget");
  }
  for (const auto& pair : pairs) {
    accountant_.Spend(phase + "/" + pair.Key(), rho_each, multiplier);
  }
  std::vector<client::Stage2Message> messages;
  messages.reserve(participants_.size());
  for (auto& p : participants_) messages.push_back(p.ShareStage2(pairs, multiplier));
  return AggregateSelected(messages);
}

double Coordinator::Stage2Multiplier(double rho_each) const {
  // A noiseless calibration (all multipliers zero) switches stage 2 off too.
  if (calibration_.multiplier_3 == 0.0) return 0.0;
  return privacy::SigmaSelected(1.0, rho_each);
}

double Coordinator::Stage2CountSigma(double rho_each) const {
  const double multiplier = Stage2Multiplier(rho_each);
  double var = 0.0;
  for (const auto& p : participants_) {
    const double s = static_cast<double>(p.n_i()) * multiplier *
                     calibration_.Sensitivity(p.n_i());
    var += s * s;
  }
  return std::sqrt(var);
}

}  // namespace fedsyn::server
