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

#include "fedsyn/pipeline/run.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "fedsyn/client/participant.h"
#include "fedsyn/data/partition.h"
#include "fedsyn/data/table.h"
#include "fedsyn/privacy/budget.h"
#include "fedsyn/rng.h"
#include "fedsyn/server/protocol.h"
#include "fedsyn/synth/gum.h"
#include "spdlog/spdlog.h"

namespace fedsyn::pipeline {

using marginals::Pair;

namespace {

// Distinct seed lineages of one run.
enum SeedTag : uint64_t {
  kPartitionSeed = 1,
  kProjectionSeed = 2,
  kParticipantSeed = 3,
  kSynthSeed = 4,
  kBaselineSeed = 5,
};

// Wraps module errors with the protocol phase they came from.
template <typename F>
auto InPhase(const char* phase, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const privacy::BudgetExceededError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(phase) + ": " + e.what());
  }
}

synth::SynthTargets Targets(const std::map<Pair, std::vector<double>>& measured,
                            const std::vector<int>& isolated,
                            const server::AggregatedView& view) {
  synth::SynthTargets targets;
  targets.selected = measured;
  for (int a : isolated) targets.isolated_one_way[a] = view.RepairedOneWay(a);
  return targets;
}

}  // namespace

nlohmann::json RunResult::MetricsJson() const {
  nlohmann::json sel = nlohmann::json::array();
  for (const auto& p : selected) sel.push_back({p.a, p.b});
  nlohmann::json doc = report.ToJson();
  doc["num_selected"] = selected.size();
  doc["selected"] = std::move(sel);
  doc["isolated"] = isolated;
  doc["rho_total"] = rho_total;
  doc["rho_spent"] = rho_spent;
  return doc;
}

data::DiscreteDataset LoadDataset(const DatasetOptions& options) {
  if (options.path.empty()) throw std::invalid_argument("dataset.path is empty");
  data::KindHints hints;
  for (const auto& [name, kind] : options.kinds) hints[name] = data::ParseKind(kind);
  auto raw = data::LoadCsv(options.path, hints);
  if (options.max_rows > 0 && static_cast<size_t>(options.max_rows) < raw.num_rows()) {
    for (auto& col : raw.columns) col.resize(static_cast<size_t>(options.max_rows));
  }
  return data::Discretize(raw, options.num_bins);
}

RunResult Run(const ExperimentConfig& config) {
  config.Validate();
  const auto ds = InPhase("load", [&] { return LoadDataset(config.dataset); });
  return RunOnDataset(config, ds);
}

RunResult RunOnDataset(const ExperimentConfig& config, const data::DiscreteDataset& ds) {
  config.Validate();
  const auto& schema = ds.schema();
  const int d = static_cast<int>(schema.size());
  const int64_t n = static_cast<int64_t>(ds.num_rows());
  if (n < 2LL * config.c) {
    throw std::invalid_argument("config 'c': need n >= 2c rows");
  }

  // Everything below this point can draw noise; all checks happen above.
  const auto plan = InPhase("budget", [&] {
    return privacy::BudgetPlan::Allocate(
        privacy::EpsDeltaToRho(config.epsilon, config.delta), config.q, d,
        config.assumed_selected_fraction);
  });
  const auto parts = InPhase("partition", [&] {
    return data::Partition(ds, data::PartitionStrategy::Parse(config.partition),
                           config.c, DeriveSeed(config.seed, {kPartitionSeed}));
  });
  const auto calibration = config.noiseless
                               ? privacy::NoiseCalibration::Noiseless(d)
                               : privacy::NoiseCalibration::FromPlan(plan, d,
                                                                     config.sensitivity);
  auto projections = config.identity_projection
                         ? marginals::ProjectionSet::Identity(schema)
                         : marginals::ProjectionSet(
                               schema, config.k,
                               DeriveSeed(config.seed, {kProjectionSeed}));
  if (!config.identity_projection) {
    if (const auto flat = client::UncompressedPairs(schema, config.k); !flat.empty()) {
      spdlog::warn("k = {} does not compress {} attribute pair(s)", config.k,
                   flat.size());
    }
  }
  server::Coordinator coordinator(parts, calibration, std::move(projections), plan,
                                  DeriveSeed(config.seed, {kParticipantSeed}));

  synth::SynthConfig synth_cfg = config.synth;
  if (synth_cfg.n_syn == 0) synth_cfg.n_syn = n;
  synth_cfg.seed = DeriveSeed(config.seed, {kSynthSeed, config.synth.seed});

  RunResult result;
  result.rho_total = plan.rho_total;
  std::map<Pair, std::vector<double>> measured;
  auto record = [&measured](const std::vector<server::SelectedMarginal>& batch) {
    for (const auto& m : batch) measured[m.pair] = m.repaired;
  };

  const bool baseline =
      config.mode == Mode::kAllMarginals || config.mode == Mode::kRandomMarginals;
  const auto view =
      InPhase("stage 1", [&] { return coordinator.RunStage1(/*share_two_way=*/!baseline); });
  std::vector<std::vector<double>> one_way(d);
  for (int a = 0; a < d; ++a) one_way[a] = view.RepairedOneWay(a);

  if (!baseline) {
    result.initial_estimates = InPhase("dependency", [&] {
      return server::InDif2Estimates(view, coordinator.projections());
    });
    const double count_sigma = coordinator.Stage2CountSigma(plan.per_marginal_rho);
    for (const auto& pair : marginals::AllPairs(d)) {
      result.psi[pair] = server::NoiseError(schema.domain_size(pair.a),
                                            schema.domain_size(pair.b), count_sigma, n);
    }
  }
  const auto phi0 = server::DependencyScores(result.initial_estimates);

  switch (config.mode) {
    case Mode::kStatic: {
      result.selected = server::SelectStatic(phi0, result.psi, &result.trace);
      result.final_phi = phi0;
      if (!result.selected.empty()) {
        const double rho_each = plan.rho_3 / static_cast<double>(result.selected.size());
        record(InPhase("stage 2", [&] {
          return coordinator.RequestSelected(result.selected, rho_each, "stage2/static");
        }));
      }
      break;
    }
    case Mode::kAdaptive: {
      server::SelectionState state;
      state.phi = phi0;
      state.psi = result.psi;
      int batch_index = 0;
      server::AdaptiveHooks hooks;
      hooks.measure = [&](std::span<const Pair> pairs) {
        record(InPhase("stage 2", [&] {
          return coordinator.RequestSelected(pairs, plan.per_marginal_rho,
                                             "stage2/batch" + std::to_string(batch_index++));
        }));
      };
      hooks.synthesize = [&]() {
        synth::SynthConfig inner = synth_cfg;
        inner.max_passes = config.inner_passes;
        inner.seed = DeriveSeed(synth_cfg.seed, {static_cast<uint64_t>(batch_index)});
        const auto isolated = server::IsolatedAttributes(d, state.selected);
        return synth::GumFit(synth::InitSynthetic(schema, one_way, inner),
                             Targets(measured, isolated, view), inner);
      };
      server::AdaptiveOptions options;
      options.batch = config.batch;
      options.max_selected = plan.assumed_selected_count;
      options.debias_update = config.update_debias;
      InPhase("selection", [&] {
        return server::SelectAdaptive(state, view, coordinator.projections(), hooks,
                                      options);
      });
      result.selected = state.selected;
      result.final_phi = state.phi;
      result.trace = state.trace;
      break;
    }
    case Mode::kAllMarginals:
    case Mode::kRandomMarginals: {
      auto pairs = marginals::AllPairs(d);
      if (config.mode == Mode::kRandomMarginals) {
        Rng rng(DeriveSeed(config.seed, {kBaselineSeed}));
        const size_t count = 1 + static_cast<size_t>(rng.UniformInt(pairs.size()));
        Shuffle(std::span<Pair>(pairs), rng);
        pairs.resize(count);
        std::sort(pairs.begin(), pairs.end());
      }
      result.selected = pairs;
      // No stage-1 two-way release: its share moves to the selected marginals.
      const double rho_each =
          (plan.rho_2 + plan.rho_3) / static_cast<double>(pairs.size());
      record(InPhase("stage 2", [&] {
        return coordinator.RequestSelected(pairs, rho_each,
                                           "stage2/" + std::string(ModeName(config.mode)));
      }));
      break;
    }
  }

  result.isolated = server::IsolatedAttributes(d, result.selected);
  result.synthetic = InPhase("synthesis", [&] {
    return synth::GumFit(synth::InitSynthetic(schema, one_way, synth_cfg),
                         Targets(measured, result.isolated, view), synth_cfg);
  });
  result.report = InPhase("evaluation",
                          [&] { return eval::Evaluate(ds, result.synthetic, config.eval); });

  result.audit = coordinator.accountant().ToJson();
  result.rho_spent = coordinator.accountant().spent();
  if (result.rho_spent > plan.rho_total * (1.0 + 1e-12)) {
    throw std::runtime_error("audit: spent rho exceeds the configured total");
  }
  return result;
}

void WriteRunDirectory(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const RunResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  open("config.json") << config.ToJson().dump(2) << "\n";
  open("metrics.json") << result.MetricsJson().dump(2) << "\n";
  open("schema.json") << result.synthetic.schema().ToJson().dump(2) << "\n";
  open("audit.json") << result.audit.dump(2) << "\n";
  {
    auto out = open("synthetic.csv");
    data::WriteDecodedCsv(result.synthetic, out);
  }
  auto trace = open("selection_trace.jsonl");
  for (const auto& rec : result.trace) trace << rec.ToJson().dump() << "\n";
}

}  // namespace fedsyn::pipeline
