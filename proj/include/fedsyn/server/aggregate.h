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

#ifndef FEDSYN_SERVER_AGGREGATE_H_
#define FEDSYN_SERVER_AGGREGATE_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fedsyn/client/messages.h"
#include "fedsyn/data/schema.h"
#include "fedsyn/marginals/marginal.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/privacy/noise.h"

namespace fedsyn::server {

// Server-side view after stage 1.
struct AggregatedView {
  data::Schema schema;
  int k = 0;
  int64_t n = 0;
  std::vector<int64_t> sizes;
  double alpha = 1.0;
  // M̂_a, length s_a.
  std::vector<std::vector<double>> one_way_hat;
  // z_ab, length k.
  std::map<marginals::Pair, std::vector<double>> z_two_way;
  // Per-cell variance of the aggregated 1-way noise: sum n_i^2 s1_i^2 / n^2.
  double v1 = 0.0;
  // Per-coordinate variance of the aggregated projected noise, per pair.
  std::map<marginals::Pair, double> v2;

  int d() const { return static_cast<int>(schema.size()); }
  // M̂_a clipped and renormalized into a distribution.
  std::vector<double> RepairedOneWay(int a) const;
};

// Sums the scaled shares and divides by n. The noise variances are derived
// from the public n_i and the calibration. Throws std::invalid_argument on
// duplicate or missing participants and on shape mismatches.
AggregatedView Aggregate(std::span<const client::Stage1Message> messages,
                         const data::Schema& schema,
                         const privacy::NoiseCalibration& calibration,
                         const marginals::ProjectionSet& projections);

// One aggregated stage-2 marginal.
struct SelectedMarginal {
  marginals::Pair pair;
  // (1/n) sum_i entries: unbiased, may be negative.
  std::vector<double> raw;
  // Clipped at zero and renormalized to sum one.
  std::vector<double> repaired;
};

// Aggregates answers to one stage-2 request. Every message must carry the
// same pairs in the same order. Result follows request order.
std::vector<SelectedMarginal> AggregateSelected(
    std::span<const client::Stage2Message> messages);

}  // namespace fedsyn::server

#endif  // FEDSYN_SERVER_AGGREGATE_H_
