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

#ifndef FEDSYN_DATA_PARTITION_H_
#define FEDSYN_DATA_PARTITION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedsyn/data/dataset.h"

namespace fedsyn::data {

struct PartitionStrategy {
  enum class Kind { kUniform, kRandomSize, kBiased };

  Kind kind = Kind::kUniform;
  // kBiased only: rows are sorted by this attribute's code.
  std::string attribute;
  // kBiased only: fraction of the sorted rows given to the first
  // participant; the rest is split evenly. Unset means equal blocks.
  std::optional<double> quantile_split;

  static PartitionStrategy Uniform() { return {}; }
  static PartitionStrategy RandomSize() { return {Kind::kRandomSize, {}, {}}; }
  static PartitionStrategy Biased(std::string attribute,
                                  std::optional<double> split = std::nullopt) {
    return {Kind::kBiased, std::move(attribute), split};
  }

  // "uniform", "random_size", "biased:<attr>" or "biased:<attr>:<split>".
  static PartitionStrategy Parse(std::string_view text);
  std::string ToString() const;
};

// Splits ds horizontally across c participants. Requires n >= 2c.
//   uniform      shuffled rows, sizes differ by at most one
//   random_size  sizes from a symmetric Dirichlet(1), each at least 2
//   biased       sorted by one attribute, contiguous blocks, shuffled within
std::vector<LocalDataset> Partition(const DiscreteDataset& ds,
                                    const PartitionStrategy& strategy, int c,
                                    uint64_t seed);

}  // namespace fedsyn::data

#endif  // FEDSYN_DATA_PARTITION_H_
