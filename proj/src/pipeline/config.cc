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

#include "fedsyn/pipeline/config.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include "fedsyn/data/partition.h"
#include "fedsyn/data/schema.h"

extern char** environ;

namespace fedsyn::pipeline {

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kStatic:
      return "static";
    case Mode::kAdaptive:
      return "adaptive";
    case Mode::kAllMarginals:
      return "all_marginals";
    case Mode::kRandomMarginals:
      return "random_marginals";
  }
  return "unknown";
}

Mode ParseMode(std::string_view name) {
  for (Mode m : {Mode::kStatic, Mode::kAdaptive, Mode::kAllMarginals,
                 Mode::kRandomMarginals}) {
    if (ModeName(m) == name) return m;
  }
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("config '" + key + "': " + why);
  };
  if (!(epsilon > 0.0)) fail("epsilon", "must be positive");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta", "must lie in (0, 1)");
  if (!(q > 0.0 && q < 1.0 / 3.0)) fail("q", "must lie in (0, 1/3)");
  if (!(assumed_selected_fraction > 0.0 && assumed_selected_fraction <= 1.0)) {
    fail("assumed_selected_fraction", "must lie in (0, 1]");
  }
  if (c < 1) fail("c", "must be >= 1");
  if (k < 1) fail("k", "must be >= 1");
  if (batch < 1) fail("batch", "must be >= 1");
  if (inner_passes < 1) fail("inner_passes", "must be >= 1");
  if (repeats < 1) fail("repeats", "must be >= 1");
  if (dataset.num_bins < 1) fail("dataset.num_bins", "must be >= 1");
  if (dataset.max_rows < 0) fail("dataset.max_rows", "must be >= 0");
  for (const auto& [name, kind] : dataset.kinds) {
    try {
      data::ParseKind(kind);
    } catch (const std::exception&) {
      fail("dataset.kinds." + name, "must be categorical or numerical");
    }
  }
  try {
    data::PartitionStrategy::Parse(partition);
  } catch (const std::exception& e) {
    fail("partition", e.what());
  }
  try {
    synth.Validate();
  } catch (const std::exception& e) {
    fail("synth", e.what());
  }
  if (eval.n_queries < 0) fail("eval.n_queries", "must be >= 0");
  if (eval.attrs_per_query < 1) fail("eval.attrs_per_query", "must be >= 1");
}

nlohmann::json ExperimentConfig::ToJson() const {
  nlohmann::json kinds = nlohmann::json::object();
  for (const auto& [name, kind] : dataset.kinds) kinds[name] = kind;
  return {
      {"dataset",
       {{"path", dataset.path},
        {"num_bins", dataset.num_bins},
        {"kinds", kinds},
        {"max_rows", dataset.max_rows}}},
      {"epsilon", epsilon},
      {"delta", delta},
      {"q", q},
      {"assumed_selected_fraction", assumed_selected_fraction},
      {"c", c},
      {"partition", partition},
      {"k", k},
      {"batch", batch},
      {"mode", ModeName(mode)},
      {"sensitivity", privacy::SensitivityModeName(sensitivity)},
      {"update_debias", update_debias},
      {"inner_passes", inner_passes},
      {"synth", synth.ToJson()},
      {"eval", eval.ToJson()},
      {"seed", seed},
      {"repeats", repeats},
      {"noiseless", noiseless},
      {"identity_projection", identity_projection},
  };
}

namespace {

void RejectUnknown(const nlohmann::json& doc, const std::set<std::string>& known,
                   const std::string& where) {
  if (!doc.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) {
      throw std::invalid_argument("unknown config key '" + where + key + "'");
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& doc) {
  RejectUnknown(doc,
                {"dataset", "epsilon", "delta", "q", "assumed_selected_fraction", "c",
                 "partition", "k", "batch", "mode", "sensitivity", "update_debias",
                 "inner_passes", "synth", "eval", "seed", "repeats", "noiseless",
                 "identity_projection"},
                "");
  ExperimentConfig cfg;
  if (doc.contains("dataset")) {
    const auto& ds = doc.at("dataset");
    RejectUnknown(ds, {"path", "num_bins", "kinds", "max_rows"}, "dataset.");
    cfg.dataset.path = ds.value("path", cfg.dataset.path);
    cfg.dataset.num_bins = ds.value("num_bins", cfg.dataset.num_bins);
    cfg.dataset.max_rows = ds.value("max_rows", cfg.dataset.max_rows);
    if (ds.contains("kinds")) {
      cfg.dataset.kinds = ds.at("kinds").get<std::map<std::string, std::string>>();
    }
  }
  cfg.epsilon = doc.value("epsilon", cfg.epsilon);
  cfg.delta = doc.value("delta", cfg.delta);
  cfg.q = doc.value("q", cfg.q);
  cfg.assumed_selected_fraction =
      doc.value("assumed_selected_fraction", cfg.assumed_selected_fraction);
  cfg.c = doc.value("c", cfg.c);
  cfg.partition = doc.value("partition", cfg.partition);
  cfg.k = doc.value("k", cfg.k);
  cfg.batch = doc.value("batch", cfg.batch);
  if (doc.contains("mode")) cfg.mode = ParseMode(doc.at("mode").get<std::string>());
  if (doc.contains("sensitivity")) {
    cfg.sensitivity =
        privacy::ParseSensitivityMode(doc.at("sensitivity").get<std::string>());
  }
  cfg.update_debias = doc.value("update_debias", cfg.update_debias);
  cfg.inner_passes = doc.value("inner_passes", cfg.inner_passes);
  if (doc.contains("synth")) {
    RejectUnknown(doc.at("synth"),
                  {"n_syn", "max_passes", "step_init", "step_decay", "tol", "move", "seed"},
                  "synth.");
    cfg.synth = synth::SynthConfig::FromJson(doc.at("synth"));
  }
  if (doc.contains("eval")) {
    RejectUnknown(doc.at("eval"), {"n_queries", "attrs_per_query", "seed", "fidelity"},
                  "eval.");
    cfg.eval = eval::EvalOptions::FromJson(doc.at("eval"));
  }
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.repeats = doc.value("repeats", cfg.repeats);
  cfg.noiseless = doc.value("noiseless", cfg.noiseless);
  cfg.identity_projection = doc.value("identity_projection", cfg.identity_projection);
  cfg.Validate();
  return cfg;
}

void ApplyEnvOverrides(nlohmann::json& doc, const std::vector<std::string>& env) {
  static constexpr std::string_view kPrefix = "FEDSYN_";
  for (const auto& entry : env) {
    if (entry.rfind(kPrefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string key = entry.substr(kPrefix.size(), eq - kPrefix.size());
    const std::string raw = entry.substr(eq + 1);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (key.empty()) continue;

    nlohmann::json* node = &doc;
    size_t start = 0;
    while (true) {
      const auto sep = key.find("__", start);
      const std::string part = key.substr(start, sep == std::string::npos
                                                     ? std::string::npos
                                                     : sep - start);
      if (sep == std::string::npos) {
        nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        (*node)[part] = std::move(value);
        break;
      }
      node = &(*node)[part];
      start = sep + 2;
    }
  }
}

void ApplyEnvOverrides(nlohmann::json& doc) {
  std::vector<std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) env.emplace_back(*e);
  std::sort(env.begin(), env.end());
  ApplyEnvOverrides(doc, env);
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  ApplyEnvOverrides(doc);
  return ExperimentConfig::FromJson(doc);
}

}  // namespace fedsyn::pipeline
