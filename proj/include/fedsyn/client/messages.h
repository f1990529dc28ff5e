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

#ifndef FEDSYN_CLIENT_MESSAGES_H_
#define FEDSYN_CLIENT_MESSAGES_H_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fedsyn/marginals/marginal.h"
#include "json.hpp"

namespace fedsyn::client {

// Everything a participant sends in the first stage. All vectors are scaled by
// n_i so that the server can form size-weighted sums.
struct Stage1Message {
  int participant_id = 0;
  int64_t n_i = 0;
  // attribute -> n_i * (M_a + G_a), length s_a.
  std::vector<std::vector<double>> scaled_one_way;
  // pair -> n_i * (M_ab P_ab + G_ab), length k.
  std::map<marginals::Pair, std::vector<double>> scaled_projected_two_way;

  // {"participant_id", "n_i", "one_way": {"<a>": [...]},
  //  "two_way_projected": {"<a>,<b>": [...]}}
  nlohmann::json ToJson() const;
  static Stage1Message FromJson(const nlohmann::json& doc);

  bool operator==(const Stage1Message&) const = default;
};

// Answer to a stage-2 request: n_i * (M_ab + G), full length s_a * s_b, one
// entry per requested pair in request order.
struct Stage2Message {
  int participant_id = 0;
  int64_t n_i = 0;
  std::vector<std::pair<marginals::Pair, std::vector<double>>> entries;

  // {"participant_id", "n_i", "two_way": [{"attrs": [a, b], "values": [...]}]}
  nlohmann::json ToJson() const;
  static Stage2Message FromJson(const nlohmann::json& doc);

  bool operator==(const Stage2Message&) const = default;
};

}  // namespace fedsyn::client

#endif  // FEDSYN_CLIENT_MESSAGES_H_
