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

#include "fedsyn/client/messages.h"

#include <string>

namespace fedsyn::client {

nlohmann::json Stage1Message::ToJson() const {
  nlohmann::json one_way = nlohmann::json::object();
  for (size_t a = 0; a < scaled_one_way.size(); ++a) {
    one_way[std::to_string(a)] = scaled_one_way[a];
  }
  nlohmann::json two_way = nlohmann::json::object();
  for (const auto& [pair, values] : scaled_projected_two_way) {
    two_way[pair.Key()] = values;
  }
  return {{"participant_id", participant_id},
          {"n_i", n_i},
          {"one_way", std::move(one_way)},
          {"two_way_projected", std::move(two_way)}};
}

Stage1Message Stage1Message::FromJson(const nlohmann::json& doc) {
  Stage1Message msg;
  msg.participant_id = doc.at("participant_id").get<int>();
  msg.n_i = doc.at("n_i").get<int64_t>();
  const auto& one_way = doc.at("one_way");
  msg.scaled_one_way.resize(one_way.size());
  for (const auto& [key, values] : one_way.items()) {
    const size_t a = std::stoul(key);
    if (a >= msg.scaled_one_way.size()) {
      throw std::invalid_argument("one_way attribute keys must be 0..d-1");
    }
    msg.scaled_one_way[a] = values.get<std::vector<double>>();
  }
  for (const auto& [key, values] : doc.at("two_way_projected").items()) {
    msg.scaled_projected_two_way[marginals::Pair::FromKey(key)] =
        values.get<std::vector<double>>();
  }
  return msg;
}

nlohmann::json Stage2Message::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [pair, values] : entries) {
    list.push_back({{"attrs", {pair.a, pair.b}}, {"values", values}});
  }
  return {{"participant_id", participant_id},
          {"n_i", n_i},
          {"two_way", std::move(list)}};
}

Stage2Message Stage2Message::FromJson(const nlohmann::json& doc) {
  Stage2Message msg;
  msg.participant_id = doc.at("participant_id").get<int>();
  msg.n_i = doc.at("n_i").get<int64_t>();
  for (const auto& entry : doc.at("two_way")) {
    const auto attrs = entry.at("attrs").get<std::vector<int>>();
    if (attrs.size() != 2) throw std::invalid_argument("stage-2 entry needs a pair");
    msg.entries.emplace_back(marginals::Pair{attrs[0], attrs[1]},
                             entry.at("values").get<std::vector<double>>());
  }
  return msg;
}

}  // namespace fedsyn::client
