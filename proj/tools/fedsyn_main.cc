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

// Command-line front end: synthesize, evaluate, bench.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fedsyn/data/schema.h"
#include "fedsyn/data/table.h"
#include "fedsyn/eval/metrics.h"
#include "fedsyn/pipeline/bench.h"
#include "fedsyn/pipeline/config.h"
#include "fedsyn/pipeline/run.h"
#include "fedsyn/privacy/budget.h"
#include "json.hpp"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

namespace fs = std::filesystem;
using namespace fedsyn;

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

int Synthesize(const std::string& config_path, std::optional<uint64_t> seed,
               const std::string& out_dir) {
  auto doc = ReadJson(config_path);
  pipeline::ApplyEnvOverrides(doc);
  if (seed) doc["seed"] = *seed;
  const auto cfg = pipeline::ExperimentConfig::FromJson(doc);
  const auto result = pipeline::Run(cfg);
  pipeline::WriteRunDirectory(out_dir, cfg, result);
  // Independent re-check of the ledger the run just wrote.
  const auto ledger = ReadJson((fs::path(out_dir) / "audit.json").string());
  double spent = 0.0;
  for (const auto& e : ledger) spent += e.at("rho_spent").get<double>();
  if (spent > result.rho_total * (1.0 + 1e-12)) {
    spdlog::critical("audit failed: spent {} > total {}", spent, result.rho_total);
    return 3;
  }
  spdlog::info("selected {} marginals; query_error={:.5f} fidelity={:.5f}; rho {:.6g}/{:.6g}",
               result.selected.size(), result.report.query_error,
               result.report.fidelity_error, spent, result.rho_total);
  std::cout << result.MetricsJson().dump(2) << "\n";
  return 0;
}

int Evaluate(const std::string& org_path, const std::string& syn_path,
             const std::string& schema_path, int num_bins, int n_queries,
             uint64_t seed, const std::string& csv_path) {
  const auto org_raw = data::LoadCsv(org_path);
  data::DiscreteDataset org;
  if (schema_path.empty()) {
    org = data::Discretize(org_raw, num_bins);
  } else {
    org = data::Encode(org_raw, data::Schema::FromJson(ReadJson(schema_path)));
  }
  const auto syn = data::Encode(data::LoadCsv(syn_path), org.schema());
  eval::EvalOptions options;
  options.n_queries = n_queries;
  options.seed = seed;
  const auto report = eval::Evaluate(org, syn, options);
  std::cout << report.ToJson().dump(2) << "\n";
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    out << "dataset,method,epsilon,c,metric,value,run\n";
    const auto name = fs::path(org_path).stem().string();
    out << name << ",external,nan,nan,query_error," << report.query_error << ",0\n";
    out << name << ",external,nan,nan,fidelity," << report.fidelity_error << ",0\n";
  }
  return 0;
}

int Bench(const std::string& grid_path, std::optional<uint64_t> seed,
          const std::string& out_dir, const std::string& csv_path) {
  auto doc = ReadJson(grid_path);
  if (doc.contains("base")) pipeline::ApplyEnvOverrides(doc["base"]);
  if (seed) doc["seed"] = *seed;
  const auto grid = pipeline::BenchGrid::FromJson(doc);
  std::optional<fs::path> run_root;
  if (!out_dir.empty()) run_root = fs::path(out_dir) / "runs";
  const auto result = pipeline::RunBench(grid, run_root);

  const fs::path long_csv = csv_path.empty()
                                ? (out_dir.empty() ? fs::path("bench_long.csv")
                                                   : fs::path(out_dir) / "bench_long.csv")
                                : fs::path(csv_path);
  if (long_csv.has_parent_path()) fs::create_directories(long_csv.parent_path());
  {
    std::ofstream out(long_csv);
    result.WriteLongCsv(out);
  }
  fs::path summary = long_csv;
  summary.replace_filename(long_csv.stem().string() + "_summary.csv");
  {
    std::ofstream out(summary);
    result.WriteSummaryCsv(out);
  }
  result.WriteSummaryCsv(std::cout);
  int failures = 0;
  for (const auto& row : result.summary) failures += row.failures;
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated differentially private tabular data synthesis"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error");

  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string csv_path;

  auto* synth = app.add_subcommand("synthesize", "Run the protocol once");
  std::string config_path;
  synth->add_option("config", config_path, "JSON config file")->required();
  synth->add_option("--seed", seed, "Master seed (overrides the config)");
  synth->add_option("--out-dir", out_dir, "Run directory")->default_val("run");

  auto* evaluate = app.add_subcommand("evaluate", "Score a synthetic CSV");
  std::string org_path, syn_path, schema_path;
  int num_bins = 100, n_queries = 1000;
  evaluate->add_option("org", org_path, "Original CSV")->required();
  evaluate->add_option("syn", syn_path, "Synthetic CSV")->required();
  evaluate->add_option("--schema", schema_path, "schema.json to code both files with");
  evaluate->add_option("--bins", num_bins, "Bins when no schema is given");
  evaluate->add_option("--queries", n_queries, "Number of range queries");
  evaluate->add_option("--seed", seed, "Query seed");
  evaluate->add_option("--csv", csv_path, "Also write a long-format CSV");

  auto* bench = app.add_subcommand("bench", "Run an experiment grid");
  std::string grid_path;
  bench->add_option("grid", grid_path, "JSON grid file")->required();
  bench->add_option("--seed", seed, "Master seed (overrides the grid)");
  bench->add_option("--out-dir", out_dir, "Directory for run directories and CSVs");
  bench->add_option("--csv", csv_path, "Long-format CSV path");

  CLI11_PARSE(app, argc, argv);
  // stdout carries JSON; logs go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("fedsyn"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*synth) return Synthesize(config_path, seed, out_dir);
    if (*evaluate) {
      return Evaluate(org_path, syn_path, schema_path, num_bins, n_queries,
                      seed.value_or(0), csv_path);
    }
    if (*bench) return Bench(grid_path, seed, out_dir, csv_path);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
