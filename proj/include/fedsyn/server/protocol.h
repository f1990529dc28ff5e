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

#ifndef FEDSYN_SERVER_PROTOCOL_H_
#define FEDSYN_SERVER_PROTOCOL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedsyn/client/participant.h"
#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/privacy/budget.h"
#include "fedsyn/privacy/noise.h"
#include "fedsyn/server/aggregate.h"

namespace fedsyn::server {

// Drives the two-stage exchange between the server and simulated
// participants. Every release is charged to the accountant before any
// participant draws noise.
class Coordinator {
 public:
  Coordinator(std::vector<data::LocalDataset> parts,
              privacy::NoiseCalibration calibration,
              marginals::ProjectionSet projections, privacy::BudgetPlan plan,
              uint64_t master_seed);

  const data::Schema& schema() const { return schema_; }
  const marginals::ProjectionSet& projections() const { return projections_; }
  const privacy::NoiseCalibration& calibration() const { return calibration_; }
  const privacy::Accountant& accountant() const { return accountant_; }
  int num_participants() const { return static_cast<int>(participants_.size()); }
  int64_t total_rows() const { return n_; }

  // Stage 1. `share_two_way` = false releases only the 1-way marginals (the
  // baselines skip dependency measurement); z is then left at zero.
  AggregatedView RunStage1(bool share_two_way = true);

  // Stage 2: charges rho_each per pair, then collects and aggregates.
  std::vector<SelectedMarginal> RequestSelected(std::span<const marginals::Pair> pairs,
                                                double rho_each,
                                                const std::string& phase);

  // Standard deviation, in count units, of the aggregated stage-2 noise when
  // each participant releases with per-marginal budget rho_each.
  double Stage2CountSigma(double rho_each) const;

  // Noise multiplier (sigma per unit sensitivity) for budget rho_each.
  double Stage2Multiplier(double rho_each) const;

 private:
  data::Schema schema_;
  privacy::NoiseCalibration calibration_;
  marginals::ProjectionSet projections_;
  privacy::Accountant accountant_;
  std::vector<client::Participant> participants_;
  int64_t n_ = 0;
};

}  // namespace fedsyn::server

#endif  // FEDSYN_SERVER_PROTOCOL_H_
