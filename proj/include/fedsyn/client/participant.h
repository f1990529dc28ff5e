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

#ifndef FEDSYN_CLIENT_PARTICIPANT_H_
#define FEDSYN_CLIENT_PARTICIPANT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedsyn/client/messages.h"
#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/privacy/noise.h"
#include "fedsyn/rng.h"

namespace fedsyn::client {

// Stage-1 share: every 1-way marginal plus every projected 2-way marginal,
// each perturbed with fresh noise from rng and scaled by n_i. Noise is drawn
// attribute by attribute, then pair by pair in lexicographic order.
Stage1Message Stage1Share(const data::LocalDataset& local,
                          const privacy::NoiseScales& scales,
                          const marginals::ProjectionSet& projections,
                          Rng& rng);

// Same, regenerating the projections from the synchronized master seed.
Stage1Message Stage1Share(const data::LocalDataset& local,
                          const privacy::NoiseScales& scales,
                          uint64_t proj_master_seed, int k, Rng& rng);

// Stage-2 share: full-resolution noisy marginals for the requested pairs, one
// independent draw per request entry (repeated pairs get independent copies).
Stage2Message Stage2Share(const data::LocalDataset& local,
                          std::span<const marginals::Pair> requested,
                          double sigma_3, Rng& rng);

// Pairs whose projection does not compress (k >= s_a * s_b).
std::vector<marginals::Pair> UncompressedPairs(const data::Schema& schema,
                                               int k);

// Seed of a participant's private noise stream.
uint64_t ParticipantSeed(uint64_t master_seed, int participant_id);

// A simulated participant: its rows, its noise stream and the shared
// calibration. Holds no server state.
class Participant {
 public:
  Participant(data::LocalDataset local, privacy::NoiseCalibration calibration,
              uint64_t master_seed);

  int id() const { return local_.participant_id; }
  int64_t n_i() const {
    return static_cast<int64_t>(local_.data.num_rows());
  }
  const data::LocalDataset& local() const { return local_; }

  privacy::NoiseScales Scales(const marginals::ProjectionSet& projections) const;

  Stage1Message ShareStage1(const marginals::ProjectionSet& projections);
  // sigma_multiplier is the per-unit-sensitivity noise level of this batch.
  Stage2Message ShareStage2(std::span<const marginals::Pair> requested,
                            double sigma_multiplier);

 private:
  data::LocalDataset local_;
  privacy::NoiseCalibration calibration_;
  Rng rng_;
};

}  // namespace fedsyn::client

#endif  // FEDSYN_CLIENT_PARTICIPANT_H_
