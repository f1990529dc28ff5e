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

#include "fedsyn/pipeline/bench.h"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "fedsyn/pipeline/run.h"
#include "fedsyn/rng.h"
#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace fedsyn::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void MergeInto(nlohmann::json& base, const nlohmann::json& patch) {
  for (const auto& [key, value] : patch.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object()) {
      MergeInto(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

std::string DatasetName(const std::string& path) {
  if (path.empty()) return "inline";
  return std::filesystem::path(path).stem().string();
}

std::string Num(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{:.10g}", x);
}

// Quotes a CSV field when needed.
std::string Field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void MeanStd(const std::vector<double>& xs, double& mean, double& sd) {
  if (xs.empty()) {
    mean = sd = kNaN;
    return;
  }
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace

BenchGrid BenchGrid::FromJson(const nlohmann::json& doc) {
  BenchGrid grid;
  nlohmann::json base = doc.value("base", nlohmann::json::object());
  if (doc.contains("seed")) base["seed"] = doc.at("seed");
  if (doc.contains("repeats")) base["repeats"] = doc.at("repeats");
  const auto base_cfg = ExperimentConfig::FromJson(base);
  grid.seed = base_cfg.seed;
  grid.repeats = base_cfg.repeats;

  std::vector<nlohmann::json> patches;
  if (doc.contains("cells")) {
    for (const auto& cell : doc.at("cells")) patches.push_back(cell);
  } else if (doc.contains("axes")) {
    patches.push_back(nlohmann::json::object());
    for (const auto& [key, values] : doc.at("axes").items()) {
      if (!values.is_array() || values.empty()) {
        throw std::invalid_argument("bench axis '" + key + "' must be a non-empty list");
      }
      std::vector<nlohmann::json> next;
      for (const auto& patch : patches) {
        for (const auto& v : values) {
          auto p = patch;
          p[key] = v;
          next.push_back(std::move(p));
        }
      }
      patches = std::move(next);
    }
  } else {
    patches.push_back(nlohmann::json::object());
  }
  for (const auto& patch : patches) {
    auto cfg_doc = base;
    MergeInto(cfg_doc, patch);
    grid.cells.push_back(ExperimentConfig::FromJson(cfg_doc));
  }
  return grid;
}

uint64_t CellSeed(uint64_t master, size_t cell, int repeat) {
  return DeriveSeed(master, {0x63656c6cULL, cell, static_cast<uint64_t>(repeat)});
}

BenchResult RunBench(const BenchGrid& grid,
                     const std::optional<std::filesystem::path>& run_root) {
  BenchResult result;
  std::map<std::tuple<std::string, int, int64_t, std::string>, data::DiscreteDataset>
      cache;
  for (size_t cell = 0; cell < grid.cells.size(); ++cell) {
    const auto& base = grid.cells[cell];
    BenchSummaryRow row;
    row.dataset = DatasetName(base.dataset.path);
    row.method = std::string(ModeName(base.mode));
    row.epsilon = base.epsilon;
    row.c = base.c;
    std::vector<double> qe, fe;
    for (int r = 0; r < grid.repeats; ++r) {
      ExperimentConfig cfg = base;
      cfg.seed = CellSeed(grid.seed, cell, r);
      // Same query workload for every cell of a repetition.
      cfg.eval.seed = DeriveSeed(grid.seed, {0x6576616cULL, static_cast<uint64_t>(r)});
      BenchRun run;
      run.cell = cell;
      run.repeat = r;
      run.dataset = row.dataset;
      run.method = row.method;
      run.epsilon = cfg.epsilon;
      run.c = cfg.c;
      try {
        const auto key = std::make_tuple(cfg.dataset.path, cfg.dataset.num_bins,
                                         cfg.dataset.max_rows,
                                         nlohmann::json(cfg.dataset.kinds).dump());
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, LoadDataset(cfg.dataset)).first;
        const auto res = RunOnDataset(cfg, it->second);
        run.query_error = res.report.query_error;
        run.fidelity_error = cfg.eval.fidelity ? res.report.fidelity_error : kNaN;
        run.rho_spent = res.rho_spent;
        run.metrics = res.MetricsJson();
        if (run_root) {
          WriteRunDirectory(*run_root / fmt::format("cell{}", cell) / fmt::format("run{}", r),
                            cfg, res);
        }
        qe.push_back(run.query_error);
        if (cfg.eval.fidelity) fe.push_back(run.fidelity_error);
      } catch (const std::exception& e) {
        run.query_error = run.fidelity_error = run.rho_spent = kNaN;
        run.error = e.what();
        ++row.failures;
        if (row.error.empty()) row.error = e.what();
        spdlog::error("bench cell {} run {} failed: {}", cell, r, e.what());
      }
      spdlog::info("bench cell {} ({}, eps={}) run {}: query_error={} fidelity={}", cell,
                   row.method, row.epsilon, r, run.query_error, run.fidelity_error);
      result.runs.push_back(std::move(run));
      ++row.runs;
    }
    MeanStd(qe, row.query_error_mean, row.query_error_std);
    MeanStd(fe, row.fidelity_mean, row.fidelity_std);
    result.summary.push_back(std::move(row));
  }
  return result;
}

void BenchResult::WriteLongCsv(std::ostream& out) const {
  out << "dataset,method,epsilon,c,metric,value,run\n";
  for (const auto& r : runs) {
    for (const auto& [metric, value] :
         {std::pair<const char*, double>{"query_error", r.query_error},
          {"fidelity", r.fidelity_error}}) {
      out << Field(r.dataset) << ',' << Field(r.method) << ',' << Num(r.epsilon) << ','
          << r.c << ',' << metric << ',' << Num(value) << ',' << r.repeat << '\n';
    }
  }
}

void BenchResult::WriteSummaryCsv(std::ostream& out) const {
  out << "dataset,method,epsilon,c,runs,failures,query_error_mean,query_error_std,"
         "fidelity_mean,fidelity_std,error\n";
  for (const auto& s : summary) {
    out << Field(s.dataset) << ',' << Field(s.method) << ',' << Num(s.epsilon) << ','
        << s.c << ',' << s.runs << ',' << s.failures << ',' << Num(s.query_error_mean)
        << ',' << Num(s.query_error_std) << ',' << Num(s.fidelity_mean) << ','
        << Num(s.fidelity_std) << ',' << Field(s.error) << '\n';
  }
}

}  // namespace fedsyn::pipeline
