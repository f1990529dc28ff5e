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

#include "fedsyn/server/selection.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <stdexcept>

#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace fedsyn::server {

using marginals::Pair;

InDif2Estimate EstimateInDif2(const AggregatedView& view,
                              const marginals::ProjectionMatrix& p) {
  const Pair pair = p.pair();
  const auto& m_a = view.one_way_hat.at(pair.a);
  const auto& m_b = view.one_way_hat.at(pair.b);
  const double s_a = static_cast<double>(m_a.size());
  const double s_b = static_cast<double>(m_b.size());
  if (static_cast<size_t>(p.rows()) != m_a.size() * m_b.size()) {
    throw std::invalid_argument("projection rows do not match pair " + pair.Key());
  }

  // z_{a*b} = (M̂_a x M̂_b) P, accumulated row by row.
  const int k = p.k();
  std::vector<double> z_prod(k, 0.0);
  for (size_t i = 0; i < m_a.size(); ++i) {
    for (size_t j = 0; j < m_b.size(); ++j) {
      const double w = m_a[i] * m_b[j];
      if (w == 0.0) continue;
      const auto row = p.row(static_cast<int>(i * m_b.size() + j));
      for (int c = 0; c < k; ++c) z_prod[c] += w * row[c];
    }
  }
  const double raw = marginals::SquaredL2Distance(view.z_two_way.at(pair), z_prod);

  const double norm_a = marginals::L2Norm(m_a);
  const double norm_b = marginals::L2Norm(m_b);
  const double v1 = view.v1;
  const double v2 = view.v2.count(pair) ? view.v2.at(pair) : 0.0;
  const double bias = k * v2 + v1 * (s_b * norm_a * norm_a + s_a * norm_b * norm_b) -
                      s_a * s_b * v1 * v1;

  InDif2Estimate est;
  est.debiased_square = raw - bias;
  est.value = std::sqrt(std::max(0.0, est.debiased_square));
  return est;
}

std::map<Pair, InDif2Estimate> InDif2Estimates(
    const AggregatedView& view, const marginals::ProjectionSet& projections) {
  std::map<Pair, InDif2Estimate> out;
  for (const auto& pair : marginals::AllPairs(view.d())) {
    out.emplace(pair, EstimateInDif2(view, projections.at(pair)));
  }
  return out;
}

ScoreMap DependencyScores(const std::map<Pair, InDif2Estimate>& estimates) {
  ScoreMap phi;
  for (const auto& [pair, est] : estimates) phi.emplace(pair, est.value);
  return phi;
}

double NoiseError(int s_a, int s_b, double sigma, int64_t n) {
  if (n <= 0) throw std::invalid_argument("n must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  return sigma / static_cast<double>(n) *
         std::sqrt(static_cast<double>(s_a) * static_cast<double>(s_b));
}

nlohmann::json TraceRecord::ToJson() const {
  nlohmann::json doc;
  doc["t"] = t;
  doc["chosen_pair"] = chosen_pair
                           ? nlohmann::json::array({chosen_pair->a, chosen_pair->b})
                           : nlohmann::json(nullptr);
  doc["E_t"] = e_t;
  doc["phi_snapshot_digest"] = phi_snapshot_digest;
  return doc;
}

std::string PhiDigest(const ScoreMap& phi) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [pair, value] : phi) {
    const int32_t ab[2] = {pair.a, pair.b};
    feed(ab, sizeof(ab));
    feed(&value, sizeof(value));
  }
  return fmt::format("{:016x}", h);
}

bool SelectionState::IsSelected(Pair pair) const {
  return std::find(selected.begin(), selected.end(), pair) != selected.end();
}

double SelectionState::Objective() const {
  double e = 0.0;
  for (const auto& [pair, f] : phi) e += IsSelected(pair) ? psi.at(pair) : f;
  return e;
}

namespace {

struct Candidate {
  Pair pair;
  double objective;
};

// Best pair to add next under the current scores; ties prefer larger phi
// when `prefer_phi` is set, then lexicographic order.
std::optional<Candidate> BestAddition(const SelectionState& state,
                                      double current, bool prefer_phi) {
  std::optional<Candidate> best;
  double best_phi = 0.0;
  for (const auto& [pair, f] : state.phi) {
    if (state.IsSelected(pair)) continue;
    const double e = current - f + state.psi.at(pair);
    bool better = !best || e < best->objective;
    if (best && e == best->objective && prefer_phi) better = f > best_phi;
    if (better) {
      best = Candidate{pair, e};
      best_phi = f;
    }
  }
  return best;
}

void Record(SelectionState& state, std::optional<Pair> chosen, double e) {
  state.total_error_history.push_back(e);
  state.trace.push_back({state.round, chosen, e, PhiDigest(state.phi)});
}

}  // namespace

std::vector<Pair> SelectStatic(const ScoreMap& phi, const ScoreMap& psi,
                               std::vector<TraceRecord>* trace) {
  SelectionState state;
  state.phi = phi;
  state.psi = psi;
  double current = state.Objective();
  Record(state, std::nullopt, current);
  while (true) {
    const auto best = BestAddition(state, current, /*prefer_phi=*/false);
    if (!best || best->objective >= current) break;
    state.selected.push_back(best->pair);
    ++state.round;
    current = best->objective;
    Record(state, best->pair, current);
  }
  if (trace != nullptr) *trace = state.trace;
  return state.selected;
}

ScoreMap UpdateScores(const SelectionState& state,
                      const data::DiscreteDataset& synthetic,
                      const AggregatedView& view,
                      const marginals::ProjectionSet& projections, bool debias) {
  ScoreMap phi = state.phi;
  std::set<int> covered;
  for (const auto& p : state.selected) {
    covered.insert(p.a);
    covered.insert(p.b);
  }
  if (covered.empty()) return phi;
  for (auto& [pair, old] : phi) {
    if (!covered.count(pair.a) && !covered.count(pair.b)) continue;
    const auto& p = projections.at(pair);
    const auto projected = p.Project(marginals::TwoWay(synthetic, pair).values);
    double sq = marginals::SquaredL2Distance(view.z_two_way.at(pair), projected);
    if (debias) sq -= p.k() * (view.v2.count(pair) ? view.v2.at(pair) : 0.0);
    const double candidate = std::sqrt(std::max(0.0, sq));
    if (candidate < old) old = candidate;
  }
  return phi;
}

std::optional<data::DiscreteDataset> SelectAdaptive(
    SelectionState& state, const AggregatedView& view,
    const marginals::ProjectionSet& projections, const AdaptiveHooks& hooks,
    const AdaptiveOptions& options) {
  if (options.batch < 1) throw std::invalid_argument("batch must be >= 1");
  std::optional<data::DiscreteDataset> synthetic;
  std::vector<Pair> pending;
  double current = state.Objective();
  Record(state, std::nullopt, current);

  while (static_cast<int>(state.selected.size()) < options.max_selected) {
    const auto best = BestAddition(state, current, /*prefer_phi=*/true);
    if (!best || best->objective >= current) break;
    state.selected.push_back(best->pair);
    pending.push_back(best->pair);
    ++state.round;
    current = best->objective;
    Record(state, best->pair, current);

    if (static_cast<int>(pending.size()) == options.batch) {
      hooks.measure(pending);
      pending.clear();
      synthetic = hooks.synthesize();
      state.phi = UpdateScores(state, *synthetic, view, projections,
                               options.debias_update);
      current = state.Objective();
    }
  }
  if (static_cast<int>(state.selected.size()) >= options.max_selected) {
    spdlog::debug("adaptive selection stopped at the share budget ({})",
                  options.max_selected);
  }
  if (!pending.empty()) hooks.measure(pending);
  return synthetic;
}

std::vector<int> IsolatedAttributes(int d, std::span<const Pair> selected) {
  std::vector<bool> covered(d, false);
  for (const auto& p : selected) covered[p.a] = covered[p.b] = true;
  std::vector<int> out;
  for (int a = 0; a < d; ++a) {
    if (!covered[a]) out.push_back(a);
  }
  return out;
}

}  // namespace fedsyn::server
