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

#ifndef FEDSYN_DATA_TABLE_H_
#define FEDSYN_DATA_TABLE_H_

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "fedsyn/data/schema.h"

namespace fedsyn::data {

// Untyped column-oriented table as read from CSV.
struct RawTable {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> columns;
  std::vector<AttributeKind> kinds;

  size_t num_rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

using KindHints = std::map<std::string, AttributeKind, std::less<>>;

// Comma-delimited, header row required, RFC 4180 quoting. Surrounding
// whitespace of unquoted fields is trimmed. A column is numerical when every
// value parses as a finite number, unless a hint overrides it. Empty fields
// are rejected.
RawTable ParseCsv(std::istream& in, const KindHints& hints = {});
RawTable LoadCsv(const std::filesystem::path& path,
                 const KindHints& hints = {});

// Equal-width binning of numerical columns over the observed [min, max]
// (the maximum lands in the last bin); categorical columns are coded in
// first-appearance order.
DiscreteDataset Discretize(const RawTable& raw, int num_bins = 100);

// Writes decoded values (bin midpoints, category labels) with a header row.
// Codes a raw table against an existing schema (columns matched by name):
// numbers fall into the schema's bins (clamped to the outer bins), labels must
// be known categories.
DiscreteDataset Encode(const RawTable& raw, const Schema& schema);

void WriteDecodedCsv(const DiscreteDataset& ds, std::ostream& out);

}  // namespace fedsyn::data

#endif  // FEDSYN_DATA_TABLE_H_
