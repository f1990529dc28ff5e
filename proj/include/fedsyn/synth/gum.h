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

#ifndef FEDSYN_SYNTH_GUM_H_
#define FEDSYN_SYNTH_GUM_H_

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/marginal.h"
#include "json.hpp"

namespace fedsyn::synth {

// How a row leaves a surplus cell for a deficit cell.
//   kReplace    overwrite the two attributes of the marginal being fitted
//   kDuplicate  copy every fitted attribute from a random row already in the
//               deficit cell; falls back to kReplace when that cell is empty
enum class MoveRule { kReplace, kDuplicate };
std::string_view MoveRuleName(MoveRule rule);
MoveRule ParseMoveRule(std::string_view name);

struct SynthConfig {
  // Output rows; 0 means "same as the original".
  int64_t n_syn = 0;
  int max_passes = 100;
  double step_init = 1.0;
  double step_decay = 0.84;
  double tol = 1e-4;
  MoveRule move = MoveRule::kDuplicate;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SynthConfig FromJson(const nlohmann::json& doc);
};

struct SynthTargets {
  // Selected pair -> repaired noisy distribution (length s_a * s_b).
  std::map<marginals::Pair, std::vector<double>> selected;
  // Isolated attribute -> repaired noisy distribution (length s_a).
  std::map<int, std::vector<double>> isolated_one_way;
};

// Samples every column i.i.d. from its 1-way distribution (clipped and
// renormalized; all-zero falls back to uniform).
data::DiscreteDataset InitSynthetic(const data::Schema& schema,
                                    const std::vector<std::vector<double>>& one_way,
                                    const SynthConfig& cfg);

// Per-visit statistics of a fit, mostly for tests.
struct FitStats {
  int passes = 0;
  // Total variation of each target right before and right after each visit.
  std::vector<double> tv_before;
  std::vector<double> tv_after;
  double final_max_tv = 0.0;
};

// Replacement-only gradual update: overwrites the (a, b) cells of rows in
// surplus cells with deficit-cell values until the selected marginals match.
// Row count, schema and isolated columns are preserved.
data::DiscreteDataset GumFit(data::DiscreteDataset init,
                             const SynthTargets& targets, const SynthConfig& cfg,
                             FitStats* stats = nullptr);

marginals::Marginal SynthMarginal(const data::DiscreteDataset& ds,
                                  marginals::Pair pair);

}  // namespace fedsyn::synth

#endif  // FEDSYN_SYNTH_GUM_H_
