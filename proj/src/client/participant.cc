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

#include "fedsyn/client/participant.h"

#include <stdexcept>

#include "spdlog/spdlog.h"

namespace fedsyn::client {

Stage1Message Stage1Share(const data::LocalDataset& local,
                          const privacy::NoiseScales& scales,
                          const marginals::ProjectionSet& projections,
                          Rng& rng) {
  const auto& ds = local.data;
  const int d = static_cast<int>(ds.num_attributes());
  const double n_i = static_cast<double>(ds.num_rows());
  Stage1Message msg;
  msg.participant_id = local.participant_id;
  msg.n_i = static_cast<int64_t>(ds.num_rows());

  msg.scaled_one_way.reserve(d);
  for (int a = 0; a < d; ++a) {
    auto values = marginals::OneWay(ds, a).values;
    const auto noise = privacy::GaussianNoise(values.size(), scales.sigma_1, rng);
    for (size_t i = 0; i < values.size(); ++i) {
      values[i] = n_i * (values[i] + noise[i]);
    }
    msg.scaled_one_way.push_back(std::move(values));
  }

  for (const auto& pair : marginals::AllPairs(d)) {
    const auto& p = projections.at(pair);
    auto projected = p.Project(marginals::TwoWay(ds, pair).values);
    const auto noise =
        privacy::GaussianNoise(projected.size(), scales.Sigma2(pair), rng);
    for (size_t j = 0; j < projected.size(); ++j) {
      projected[j] = n_i * (projected[j] + noise[j]);
    }
    msg.scaled_projected_two_way.emplace(pair, std::move(projected));
  }
  return msg;
}

Stage1Message Stage1Share(const data::LocalDataset& local,
                          const privacy::NoiseScales& scales,
                          uint64_t proj_master_seed, int k, Rng& rng) {
  const auto& schema = local.data.schema();
  if (const auto flat = UncompressedPairs(schema, k); !flat.empty()) {
    spdlog::warn("k = {} does not compress {} attribute pair(s)", k,
                 flat.size());
  }
  const marginals::ProjectionSet projections(schema, k, proj_master_seed);
  return Stage1Share(local, scales, projections, rng);
}

Stage2Message Stage2Share(const data::LocalDataset& local,
                          std::span<const marginals::Pair> requested,
                          double sigma_3, Rng& rng) {
  const auto& ds = local.data;
  const double n_i = static_cast<double>(ds.num_rows());
  Stage2Message msg;
  msg.participant_id = local.participant_id;
  msg.n_i = static_cast<int64_t>(ds.num_rows());
  msg.entries.reserve(requested.size());
  for (const auto& pair : requested) {
    auto values = marginals::TwoWay(ds, pair).values;
    const auto noise = privacy::GaussianNoise(values.size(), sigma_3, rng);
    for (size_t i = 0; i < values.size(); ++i) {
      values[i] = n_i * (values[i] + noise[i]);
    }
    msg.entries.emplace_back(pair, std::move(values));
  }
  return msg;
}

std::vector<marginals::Pair> UncompressedPairs(const data::Schema& schema,
                                               int k) {
  std::vector<marginals::Pair> out;
  for (const auto& p : marginals::AllPairs(static_cast<int>(schema.size()))) {
    if (k >= schema.domain_size(p.a) * schema.domain_size(p.b)) out.push_back(p);
  }
  return out;
}

uint64_t ParticipantSeed(uint64_t master_seed, int participant_id) {
  return DeriveSeed(master_seed,
                    {0x636c69656e74ULL, static_cast<uint64_t>(participant_id)});
}

Participant::Participant(data::LocalDataset local,
                         privacy::NoiseCalibration calibration,
                         uint64_t master_seed)
    : local_(std::move(local)),
      calibration_(calibration),
      rng_(ParticipantSeed(master_seed, local_.participant_id)) {
  if (local_.data.num_rows() < 2) {
    throw std::invalid_argument("participant needs at least two rows");
  }
}

privacy::NoiseScales Participant::Scales(
    const marginals::ProjectionSet& projections) const {
  return privacy::NoiseScales::For(calibration_, n_i(), projections);
}

Stage1Message Participant::ShareStage1(
    const marginals::ProjectionSet& projections) {
  return Stage1Share(local_, Scales(projections), projections, rng_);
}

Stage2Message Participant::ShareStage2(
    std::span<const marginals::Pair> requested, double sigma_multiplier) {
  const double sigma = sigma_multiplier * calibration_.Sensitivity(n_i());
  return Stage2Share(local_, requested, sigma, rng_);
}

}  // namespace fedsyn::client
