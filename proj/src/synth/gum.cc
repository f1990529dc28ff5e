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

#include "fedsyn/synth/gum.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsyn/rng.h"

namespace fedsyn::synth {

using marginals::Pair;

std::string_view MoveRuleName(MoveRule rule) {
  return rule == MoveRule::kReplace ? "replace" : "duplicate";
}

MoveRule ParseMoveRule(std::string_view name) {
  if (name == "replace") return MoveRule::kReplace;
  if (name == "duplicate") return MoveRule::kDuplicate;
  throw std::invalid_argument("unknown move rule '" + std::string(name) + "'");
}

void SynthConfig::Validate() const {
  if (n_syn < 0) throw std::invalid_argument("n_syn must be >= 0");
  if (max_passes < 0) throw std::invalid_argument("max_passes must be >= 0");
  if (!(step_init > 0.0 && step_init <= 1.0)) {
    throw std::invalid_argument("step_init must be in (0, 1]");
  }
  if (!(step_decay > 0.0 && step_decay < 1.0)) {
    throw std::invalid_argument("step_decay must be in (0, 1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

nlohmann::json SynthConfig::ToJson() const {
  return {{"n_syn", n_syn},         {"max_passes", max_passes},
          {"step_init", step_init}, {"step_decay", step_decay},
          {"tol", tol},             {"move", MoveRuleName(move)},
          {"seed", seed}};
}

SynthConfig SynthConfig::FromJson(const nlohmann::json& doc) {
  SynthConfig cfg;
  cfg.n_syn = doc.value("n_syn", cfg.n_syn);
  cfg.max_passes = doc.value("max_passes", cfg.max_passes);
  cfg.step_init = doc.value("step_init", cfg.step_init);
  cfg.step_decay = doc.value("step_decay", cfg.step_decay);
  cfg.tol = doc.value("tol", cfg.tol);
  if (doc.contains("move")) cfg.move = ParseMoveRule(doc.at("move").get<std::string>());
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.Validate();
  return cfg;
}

data::DiscreteDataset InitSynthetic(const data::Schema& schema,
                                    const std::vector<std::vector<double>>& one_way,
                                    const SynthConfig& cfg) {
  cfg.Validate();
  if (cfg.n_syn < 1) throw std::invalid_argument("InitSynthetic needs n_syn >= 1");
  if (one_way.size() != schema.size()) {
    throw std::invalid_argument("one 1-way marginal per attribute required");
  }
  const size_t n = static_cast<size_t>(cfg.n_syn);
  data::DiscreteDataset ds(schema, n);
  for (size_t a = 0; a < schema.size(); ++a) {
    if (one_way[a].size() != static_cast<size_t>(schema.domain_size(a))) {
      throw std::invalid_argument("1-way marginal length mismatch");
    }
    const auto dist = marginals::ProjectToSimplexByClipping(one_way[a]);
    std::vector<double> cdf(dist.size());
    std::partial_sum(dist.begin(), dist.end(), cdf.begin());
    Rng rng(DeriveSeed(cfg.seed, {0x696e6974ULL, a}));
    auto col = ds.mutable_column(a);
    const int last = static_cast<int>(dist.size()) - 1;
    for (size_t r = 0; r < n; ++r) {
      const double u = rng.Uniform() * cdf.back();
      int code = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                  cdf.begin());
      code = std::min(code, last);
      // Never land on a zero-mass cell through rounding at the boundary.
      while (code > 0 && dist[code] == 0.0) --code;
      col[r] = code;
    }
  }
  return ds;
}

namespace {

double CountTv(std::span<const int64_t> counts, std::span<const double> target,
               double n) {
  double s = 0.0;
  for (size_t c = 0; c < counts.size(); ++c) {
    s += std::abs(static_cast<double>(counts[c]) / n - target[c]);
  }
  return 0.5 * s;
}

// One visit of one marginal. Returns (tv before, tv after).
std::pair<double, double> FitMarginal(data::DiscreteDataset& ds, Pair pair,
                                      std::span<const double> target, double step,
                                      MoveRule rule, std::span<const int> fitted,
                                      Rng& rng,
                                      std::vector<std::vector<size_t>>& buckets) {
  const double n = static_cast<double>(ds.num_rows());
  const int s_b = ds.schema().domain_size(pair.b);
  auto counts = marginals::TwoWayCounts(ds, pair);
  if (counts.size() != target.size()) {
    throw std::invalid_argument("target length mismatch for pair " + pair.Key());
  }
  const double before = CountTv(counts, target, n);

  const size_t cells = counts.size();
  std::vector<double> gap(cells);
  std::vector<size_t> surplus, deficit;
  for (size_t c = 0; c < cells; ++c) {
    gap[c] = static_cast<double>(counts[c]) - target[c] * n;
    if (gap[c] >= 1.0) surplus.push_back(c);
    if (gap[c] < 0.0) deficit.push_back(c);
  }
  if (surplus.empty() || deficit.empty()) return {before, before};
  auto by_gap_desc = [&](size_t x, size_t y) {
    const double gx = std::abs(gap[x]), gy = std::abs(gap[y]);
    return gx != gy ? gx > gy : x < y;
  };
  std::sort(surplus.begin(), surplus.end(), by_gap_desc);
  std::sort(deficit.begin(), deficit.end(), by_gap_desc);

  buckets.resize(std::max(buckets.size(), cells));
  const bool donors = rule == MoveRule::kDuplicate;
  for (size_t c : surplus) buckets[c].clear();
  if (donors) {
    for (size_t c : deficit) buckets[c].clear();
  }
  auto col_a = ds.mutable_column(pair.a);
  auto col_b = ds.mutable_column(pair.b);
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    const size_t c = static_cast<size_t>(col_a[r]) * s_b + col_b[r];
    if (gap[c] >= 1.0 || (donors && gap[c] < 0.0)) buckets[c].push_back(r);
  }
  // Rows of deficit cells are never moved during a visit, so they stay valid
  // donors throughout.
  auto move_row = [&](size_t r, size_t t) {
    const auto& pool = buckets[t];
    if (donors && !pool.empty()) {
      const size_t donor = pool[static_cast<size_t>(rng.UniformInt(pool.size()))];
      for (int attr : fitted) {
        auto col = ds.mutable_column(static_cast<size_t>(attr));
        col[r] = col[donor];
      }
      return;
    }
    col_a[r] = static_cast<data::Code>(t / s_b);
    col_b[r] = static_cast<data::Code>(t % s_b);
  };

  size_t i = 0, j = 0;
  std::vector<size_t> taken(cells, 0);
  double rem_s = gap[surplus[0]];
  double rem_d = -gap[deficit[0]];
  while (i < surplus.size() && j < deficit.size()) {
    const size_t s = surplus[i];
    const size_t t = deficit[j];
    const double amount = std::min(rem_s, rem_d);
    auto& bucket = buckets[s];
    const size_t want = static_cast<size_t>(std::floor(step * amount));
    const size_t moves = std::min(want, bucket.size() - taken[s]);
    for (size_t m = 0; m < moves; ++m) {
      const size_t pos = taken[s] + static_cast<size_t>(
                                        rng.UniformInt(bucket.size() - taken[s]));
      std::swap(bucket[taken[s]], bucket[pos]);
      move_row(bucket[taken[s]++], t);
    }
    counts[s] -= static_cast<int64_t>(moves);
    counts[t] += static_cast<int64_t>(moves);
    rem_s -= amount;
    rem_d -= amount;
    if (rem_s <= 0.0 && ++i < surplus.size()) rem_s = gap[surplus[i]];
    if (rem_d <= 0.0 && ++j < deficit.size()) rem_d = -gap[deficit[j]];
  }
  return {before, CountTv(counts, target, n)};
}

}  // namespace

data::DiscreteDataset GumFit(data::DiscreteDataset ds, const SynthTargets& targets,
                             const SynthConfig& cfg, FitStats* stats) {
  cfg.Validate();
  for (const auto& [pair, target] : targets.selected) {
    const size_t cells = static_cast<size_t>(ds.schema().domain_size(pair.a)) *
                         ds.schema().domain_size(pair.b);
    if (target.size() != cells) {
      throw std::invalid_argument("target length mismatch for pair " + pair.Key());
    }
  }
  FitStats local;
  FitStats& st = stats ? *stats : local;
  st = FitStats{};
  Rng rng(DeriveSeed(cfg.seed, {0x67756dULL}));
  std::vector<std::vector<size_t>> buckets;
  std::vector<int> fitted;
  for (const auto& [pair, target] : targets.selected) {
    fitted.push_back(pair.a);
    fitted.push_back(pair.b);
  }
  std::sort(fitted.begin(), fitted.end());
  fitted.erase(std::unique(fitted.begin(), fitted.end()), fitted.end());
  double step = cfg.step_init;
  for (int pass = 0; pass < cfg.max_passes && !targets.selected.empty(); ++pass) {
    double best_improvement = 0.0;
    for (const auto& [pair, target] : targets.selected) {
      const auto [before, after] = FitMarginal(ds, pair, target, step, cfg.move, fitted, rng, buckets);
      st.tv_before.push_back(before);
      st.tv_after.push_back(after);
      best_improvement = std::max(best_improvement, before - after);
    }
    ++st.passes;
    step *= cfg.step_decay;
    if (best_improvement < cfg.tol) break;
  }
  st.final_max_tv = 0.0;
  for (const auto& [pair, target] : targets.selected) {
    st.final_max_tv = std::max(
        st.final_max_tv,
        marginals::TotalVariation(marginals::TwoWay(ds, pair).values, target));
  }
  return ds;
}

marginals::Marginal SynthMarginal(const data::DiscreteDataset& ds, Pair pair) {
  return marginals::TwoWay(ds, pair);
}

}  // namespace fedsyn::synth
