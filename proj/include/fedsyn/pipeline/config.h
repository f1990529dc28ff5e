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

#ifndef FEDSYN_PIPELINE_CONFIG_H_
#define FEDSYN_PIPELINE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fedsyn/eval/metrics.h"
#include "fedsyn/privacy/noise.h"
#include "fedsyn/synth/gum.h"
#include "json.hpp"

namespace fedsyn::pipeline {

enum class Mode { kStatic, kAdaptive, kAllMarginals, kRandomMarginals };

std::string_view ModeName(Mode mode);
Mode ParseMode(std::string_view name);

struct DatasetOptions {
  std::string path;
  int num_bins = 100;
  // Column name -> "categorical" | "numerical".
  std::map<std::string, std::string> kinds;
  // Keep only the first max_rows rows when positive.
  int64_t max_rows = 0;
};

struct ExperimentConfig {
  DatasetOptions dataset;
  double epsilon = 5.0;
  double delta = 1e-5;
  double q = 0.2;
  double assumed_selected_fraction = 1.0 / 3.0;
  int c = 5;
  std::string partition = "uniform";
  int k = 10;
  int batch = 10;
  Mode mode = Mode::kAdaptive;
  privacy::SensitivityMode sensitivity = privacy::SensitivityMode::kLocal;
  bool update_debias = false;
  // Passes of each synthesis run inside the adaptive loop.
  int inner_passes = 10;
  synth::SynthConfig synth;
  eval::EvalOptions eval;
  uint64_t seed = 0;
  int repeats = 5;
  // Test injection: zero noise and/or identity projections.
  bool noiseless = false;
  bool identity_projection = false;

  // Checks every precondition that does not need the data. Throws
  // std::invalid_argument naming the offending key.
  void Validate() const;

  nlohmann::json ToJson() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig FromJson(const nlohmann::json& doc);
};

// Applies FEDSYN_<KEY> environment overrides to a config document. Nested
// keys are joined with "__" (FEDSYN_SYNTH__MAX_PASSES=20). Values are parsed
// as JSON when possible, otherwise taken as strings.
void ApplyEnvOverrides(nlohmann::json& doc, const std::vector<std::string>& env);

// Same, reading the process environment.
void ApplyEnvOverrides(nlohmann::json& doc);

// Reads a JSON config file, applies environment overrides and parses it.
ExperimentConfig LoadConfig(const std::string& path);

}  // namespace fedsyn::pipeline

#endif  // FEDSYN_PIPELINE_CONFIG_H_
