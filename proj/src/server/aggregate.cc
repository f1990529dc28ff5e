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

#include "fedsyn/server/aggregate.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace fedsyn::server {

std::vector<double> AggregatedView::RepairedOneWay(int a) const {
  return marginals::ProjectToSimplexByClipping(one_way_hat.at(a));
}

namespace {

void AddInto(std::vector<double>& acc, std::span<const double> v,
             const char* what) {
  if (acc.size() != v.size()) {
    throw std::invalid_argument(std::string("length mismatch in ") + what);
  }
  for (size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}

}  // namespace

AggregatedView Aggregate(std::span<const client::Stage1Message> messages,
                         const data::Schema& schema,
                         const privacy::NoiseCalibration& calibration,
                         const marginals::ProjectionSet& projections) {
  if (messages.empty()) throw std::invalid_argument("no stage-1 messages");
  const int d = static_cast<int>(schema.size());
  const auto pairs = marginals::AllPairs(d);

  std::set<int> ids;
  for (const auto& m : messages) ids.insert(m.participant_id);
  if (ids.size() != messages.size() || *ids.begin() != 0 ||
      *ids.rbegin() != static_cast<int>(messages.size()) - 1) {
    throw std::invalid_argument(
        "stage-1 messages must come from participants 0..c-1, once each");
  }

  AggregatedView view;
  view.schema = schema;
  view.one_way_hat.resize(d);
  for (int a = 0; a < d; ++a) view.one_way_hat[a].assign(schema.domain_size(a), 0.0);
  int k = -1;
  for (const auto& p : pairs) {
    const int pk = projections.at(p).k();
    view.z_two_way[p].assign(pk, 0.0);
    if (k < 0) k = pk;
    if (pk != k) k = 0;  // Mixed dimensions only happen with test injection.
  }
  view.k = std::max(k, 0);

  for (const auto& m : messages) {
    if (m.n_i < 1) throw std::invalid_argument("participant with no rows");
    if (static_cast<int>(m.scaled_one_way.size()) != d ||
        m.scaled_projected_two_way.size() != pairs.size()) {
      throw std::invalid_argument("stage-1 message does not cover the schema");
    }
    view.n += m.n_i;
    view.sizes.push_back(m.n_i);
    for (int a = 0; a < d; ++a) {
      AddInto(view.one_way_hat[a], m.scaled_one_way[a], "one-way share");
    }
    for (const auto& p : pairs) {
      auto it = m.scaled_projected_two_way.find(p);
      if (it == m.scaled_projected_two_way.end()) {
        throw std::invalid_argument("stage-1 message misses pair " + p.Key());
      }
      AddInto(view.z_two_way[p], it->second, "projected share");
    }
  }

  const double n = static_cast<double>(view.n);
  for (auto& v : view.one_way_hat) {
    for (auto& x : v) x /= n;
  }
  for (auto& [p, z] : view.z_two_way) {
    for (auto& x : z) x /= n;
  }
  view.alpha = privacy::ComputeAlpha(view.sizes);

  // Noise variances: participant i contributes n_i * G with G ~ N(0, s_i^2).
  for (const auto& m : messages) {
    const auto scales = privacy::NoiseScales::For(calibration, m.n_i, projections);
    const double w = static_cast<double>(m.n_i) * static_cast<double>(m.n_i);
    view.v1 += w * scales.sigma_1 * scales.sigma_1;
    for (const auto& p : pairs) {
      const double s2 = scales.Sigma2(p);
      view.v2[p] += w * s2 * s2;
    }
  }
  view.v1 /= n * n;
  for (auto& [p, v] : view.v2) v /= n * n;
  return view;
}

std::vector<SelectedMarginal> AggregateSelected(
    std::span<const client::Stage2Message> messages) {
  std::vector<SelectedMarginal> out;
  if (messages.empty()) return out;
  const auto& first = messages.front().entries;
  for (const auto& [pair, values] : first) {
    out.push_back({pair, std::vector<double>(values.size(), 0.0), {}});
  }
  double n = 0.0;
  for (const auto& m : messages) {
    if (m.entries.size() != first.size()) {
      throw std::invalid_argument("stage-2 answers cover different requests");
    }
    n += static_cast<double>(m.n_i);
    for (size_t j = 0; j < m.entries.size(); ++j) {
      if (m.entries[j].first != out[j].pair) {
        throw std::invalid_argument("stage-2 answers cover different requests");
      }
      AddInto(out[j].raw, m.entries[j].second, "stage-2 share");
    }
  }
  for (auto& s : out) {
    for (auto& x : s.raw) x /= n;
    s.repaired = marginals::ProjectToSimplexByClipping(s.raw);
  }
  return out;
}

}  // namespace fedsyn::server
