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

#include "fedsyn/data/dataset.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fedsyn::data {

DiscreteDataset::DiscreteDataset(Schema schema, size_t num_rows)
    : schema_(std::move(schema)),
      num_rows_(num_rows),
      columns_(schema_.size(), std::vector<Code>(num_rows, 0)) {}

DiscreteDataset::DiscreteDataset(Schema schema,
                                 std::vector<std::vector<Code>> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size()) {
    throw std::invalid_argument("column count does not match schema");
  }
  num_rows_ = columns_.empty() ? 0 : columns_[0].size();
  for (const auto& col : columns_) {
    if (col.size() != num_rows_) {
      throw std::invalid_argument("ragged columns");
    }
  }
  Validate();
}

DiscreteDataset DiscreteDataset::FromRows(
    Schema schema, const std::vector<std::vector<Code>>& rows) {
  std::vector<std::vector<Code>> columns(schema.size());
  for (auto& col : columns) col.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != schema.size()) {
      throw std::invalid_argument("row width does not match schema");
    }
    for (size_t a = 0; a < row.size(); ++a) columns[a].push_back(row[a]);
  }
  return DiscreteDataset(std::move(schema), std::move(columns));
}

std::vector<Code> DiscreteDataset::Row(size_t row) const {
  std::vector<Code> out(columns_.size());
  for (size_t a = 0; a < columns_.size(); ++a) out[a] = columns_[a][row];
  return out;
}

DiscreteDataset DiscreteDataset::Select(std::span<const size_t> rows) const {
  DiscreteDataset out(schema_, rows.size());
  for (size_t a = 0; a < columns_.size(); ++a) {
    auto& dst = out.columns_[a];
    const auto& src = columns_[a];
    for (size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

void DiscreteDataset::Validate() const {
  for (size_t a = 0; a < columns_.size(); ++a) {
    const Code limit = schema_.domain_size(a);
    for (Code v : columns_[a]) {
      if (v < 0 || v >= limit) {
        throw std::invalid_argument("code " + std::to_string(v) +
                                    " out of domain for attribute '" +
                                    schema_.attribute(a).name + "'");
      }
    }
  }
}

std::vector<std::vector<Code>> SortedRows(const DiscreteDataset& ds) {
  std::vector<std::vector<Code>> rows;
  rows.reserve(ds.num_rows());
  for (size_t r = 0; r < ds.num_rows(); ++r) rows.push_back(ds.Row(r));
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace fedsyn::data
