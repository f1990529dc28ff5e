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

#ifndef FEDSYN_DATA_DATASET_H_
#define FEDSYN_DATA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedsyn/data/schema.h"

namespace fedsyn::data {

using Code = int32_t;

// Integer-coded records over a schema, stored column-major.
class DiscreteDataset {
 public:
  DiscreteDataset() = default;
  // Zero-filled dataset with num_rows rows.
  DiscreteDataset(Schema schema, size_t num_rows);
  // Takes ownership of per-attribute columns; validates shape and code range.
  DiscreteDataset(Schema schema, std::vector<std::vector<Code>> columns);

  // Builds from row tuples, handy in tests.
  static DiscreteDataset FromRows(Schema schema,
                                  const std::vector<std::vector<Code>>& rows);

  const Schema& schema() const { return schema_; }
  size_t num_rows() const { return num_rows_; }
  size_t num_attributes() const { return schema_.size(); }

  std::span<const Code> column(size_t a) const { return columns_[a]; }
  std::span<Code> mutable_column(size_t a) { return columns_[a]; }
  Code at(size_t row, size_t a) const { return columns_[a][row]; }

  std::vector<Code> Row(size_t row) const;

  // Copies the given rows, in order, into a new dataset.
  DiscreteDataset Select(std::span<const size_t> rows) const;

  // Throws std::invalid_argument if any code is out of its domain.
  void Validate() const;

  bool operator==(const DiscreteDataset&) const = default;

 private:
  Schema schema_;
  size_t num_rows_ = 0;
  std::vector<std::vector<Code>> columns_;
};

// Rows held by one simulated participant.
struct LocalDataset {
  int participant_id = 0;
  DiscreteDataset data;
};

// Returns all rows as tuples sorted lexicographically; used to compare
// datasets as multisets.
std::vector<std::vector<Code>> SortedRows(const DiscreteDataset& ds);

}  // namespace fedsyn::data

#endif  // FEDSYN_DATA_DATASET_H_
