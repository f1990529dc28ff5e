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

#ifndef FEDSYN_PIPELINE_RUN_H_
#define FEDSYN_PIPELINE_RUN_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "fedsyn/eval/metrics.h"
#include "fedsyn/marginals/marginal.h"
#include "fedsyn/pipeline/config.h"
#include "fedsyn/server/selection.h"
#include "json.hpp"

namespace fedsyn::pipeline {

struct RunResult {
  eval::EvalReport report;
  data::DiscreteDataset synthetic;
  std::vector<marginals::Pair> selected;
  std::vector<int> isolated;
  // Stage-1 dependency estimates and the noise errors used for selection
  // (empty for the baseline modes).
  std::map<marginals::Pair, server::InDif2Estimate> initial_estimates;
  server::ScoreMap psi;
  // Scores at the end of selection (after adaptive updates).
  server::ScoreMap final_phi;
  std::vector<server::TraceRecord> trace;
  nlohmann::json audit;  // [{"phase", "rho_spent", "sigma_used"}]
  double rho_total = 0.0;
  double rho_spent = 0.0;

  // Deterministic metrics document (no timings).
  nlohmann::json MetricsJson() const;
};

// Runs the whole protocol on an already discretized dataset.
RunResult RunOnDataset(const ExperimentConfig& config, const data::DiscreteDataset& ds);

// Loads config.dataset, discretizes it, and runs.
data::DiscreteDataset LoadDataset(const DatasetOptions& options);
RunResult Run(const ExperimentConfig& config);

// Writes config.json, metrics.json, synthetic.csv, schema.json, audit.json and
// selection_trace.jsonl into `dir` (created if needed).
void WriteRunDirectory(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const RunResult& result);

}  // namespace fedsyn::pipeline

#endif  // FEDSYN_PIPELINE_RUN_H_
