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

#ifndef FEDSYN_SERVER_SELECTION_H_
#define FEDSYN_SERVER_SELECTION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/marginal.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/server/aggregate.h"
#include "json.hpp"

namespace fedsyn::server {

using ScoreMap = std::map<marginals::Pair, double>;

struct InDif2Estimate {
  // Debiased estimate of InDif2^2; unbiased, may be negative.
  double debiased_square = 0.0;
  // sqrt(max(0, debiased_square)).
  double value = 0.0;
};

InDif2Estimate EstimateInDif2(const AggregatedView& view,
                              const marginals::ProjectionMatrix& p);

std::map<marginals::Pair, InDif2Estimate> InDif2Estimates(
    const AggregatedView& view, const marginals::ProjectionSet& projections);

// Clipped estimates only, ready to serve as dependency errors.
ScoreMap DependencyScores(
    const std::map<marginals::Pair, InDif2Estimate>& estimates);

// (sigma / n) * sqrt(s_a * s_b). Pass sigma in count units, i.e. the standard
// deviation of the noise on the aggregated count vector.
double NoiseError(int s_a, int s_b, double sigma, int64_t n);

// One line of the selection trace.
struct TraceRecord {
  int t = 0;
  std::optional<marginals::Pair> chosen_pair;
  double e_t = 0.0;
  std::string phi_snapshot_digest;

  // {"t", "chosen_pair": [a, b] | null, "E_t", "phi_snapshot_digest"}
  nlohmann::json ToJson() const;
};

// FNV-1a over the (pair, value) bytes, rendered as 16 hex digits.
std::string PhiDigest(const ScoreMap& phi);

struct SelectionState {
  ScoreMap phi;
  ScoreMap psi;
  std::vector<marginals::Pair> selected;
  int round = 0;
  std::vector<double> total_error_history;
  std::vector<TraceRecord> trace;

  bool IsSelected(marginals::Pair pair) const;
  // sum_{z in X} psi_z + sum_{z not in X} phi_z.
  double Objective() const;
};

// Greedy minimization with frozen phi. Returns the pairs in the order they
// were added. The trace, when given, receives one record per round.
std::vector<marginals::Pair> SelectStatic(const ScoreMap& phi,
                                          const ScoreMap& psi,
                                          std::vector<TraceRecord>* trace = nullptr);

// Recomputes phi from a synthetic dataset, never increasing any score.
ScoreMap UpdateScores(const SelectionState& state,
                      const data::DiscreteDataset& synthetic,
                      const AggregatedView& view,
                      const marginals::ProjectionSet& projections,
                      bool debias = false);

struct AdaptiveHooks {
  // Stage-2 round trip for freshly selected pairs.
  std::function<void(std::span<const marginals::Pair>)> measure;
  // Fits a synthetic dataset to everything measured so far.
  std::function<data::DiscreteDataset()> synthesize;
};

struct AdaptiveOptions {
  int batch = 10;
  // Upper bound on |X|, the number of shares the budget plan paid for.
  int max_selected = 1;
  bool debias_update = false;
};

// Runs the adaptive loop on `state` (phi and psi must be populated). Every
// newly selected pair is eventually passed to hooks.measure exactly once.
// Returns the last synthetic dataset produced inside the loop, if any.
std::optional<data::DiscreteDataset> SelectAdaptive(
    SelectionState& state, const AggregatedView& view,
    const marginals::ProjectionSet& projections, const AdaptiveHooks& hooks,
    const AdaptiveOptions& options);

// Attributes covered by no pair in `selected`.
std::vector<int> IsolatedAttributes(int d,
                                    std::span<const marginals::Pair> selected);

}  // namespace fedsyn::server

#endif  // FEDSYN_SERVER_SELECTION_H_
