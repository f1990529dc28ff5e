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

#ifndef FEDSYN_PIPELINE_BENCH_H_
#define FEDSYN_PIPELINE_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fedsyn/pipeline/config.h"
#include "json.hpp"

namespace fedsyn::pipeline {

// A grid document is either
//   {"base": {...config...}, "axes": {"epsilon": [0.2, 5], "mode": [...]}}
// (cartesian product of the axes, last axis varying fastest) or
//   {"base": {...}, "cells": [{...overrides...}, ...]}.
// Top-level "seed" and "repeats" override the base values.
struct BenchGrid {
  std::vector<ExperimentConfig> cells;
  uint64_t seed = 0;
  int repeats = 5;

  static BenchGrid FromJson(const nlohmann::json& doc);
};

// Seed of repetition `repeat` of cell `cell`.
uint64_t CellSeed(uint64_t master, size_t cell, int repeat);

struct BenchRun {
  size_t cell = 0;
  int repeat = 0;
  std::string dataset;
  std::string method;
  double epsilon = 0.0;
  int c = 0;
  double query_error = 0.0;
  double fidelity_error = 0.0;
  double rho_spent = 0.0;
  std::string error;  // Empty on success; metrics are NaN otherwise.
  nlohmann::json metrics;
};

struct BenchSummaryRow {
  std::string dataset;
  std::string method;
  double epsilon = 0.0;
  int c = 0;
  int runs = 0;
  int failures = 0;
  double query_error_mean = 0.0;
  double query_error_std = 0.0;
  double fidelity_mean = 0.0;
  double fidelity_std = 0.0;
  std::string error;
};

struct BenchResult {
  std::vector<BenchRun> runs;
  std::vector<BenchSummaryRow> summary;

  // (dataset, method, epsilon, c, metric, value, run)
  void WriteLongCsv(std::ostream& out) const;
  // One row per cell with means and sample standard deviations.
  void WriteSummaryCsv(std::ostream& out) const;
};

// Runs every cell `repeats` times. A failing run is recorded with NaN metrics
// and its message; the remaining runs continue. When `run_root` is set, each
// run writes its run directory to run_root/cell<i>/run<r>.
BenchResult RunBench(const BenchGrid& grid,
                     const std::optional<std::filesystem::path>& run_root = std::nullopt);

}  // namespace fedsyn::pipeline

#endif  // FEDSYN_PIPELINE_BENCH_H_
