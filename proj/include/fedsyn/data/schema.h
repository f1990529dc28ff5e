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

#ifndef FEDSYN_DATA_SCHEMA_H_
#define FEDSYN_DATA_SCHEMA_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fedsyn::data {

enum class AttributeKind { kCategorical, kNumerical };

std::string_view KindName(AttributeKind kind);
AttributeKind ParseKind(std::string_view name);

// One column of the public domain. Numerical attributes carry domain_size + 1
// ascending bin edges; categorical attributes carry one label per code.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  int domain_size = 1;
  std::vector<double> bin_edges;
  std::vector<std::string> category_labels;

  // Throws std::invalid_argument when the invariants do not hold.
  void Validate() const;

  // Human-readable value for a code: bin midpoint or category label.
  std::string Decode(int code) const;

  bool operator==(const AttributeSpec&) const = default;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSpec> attributes);

  size_t size() const { return attributes_.size(); }
  const AttributeSpec& attribute(size_t a) const { return attributes_.at(a); }
  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  int domain_size(size_t a) const { return attributes_[a].domain_size; }

  // Index of the attribute with this name; throws std::out_of_range.
  size_t IndexOf(std::string_view name) const;

  // {"attributes":[{"name","kind","domain_size","bin_edges"|"category_labels"}]}
  nlohmann::json ToJson() const;
  static Schema FromJson(const nlohmann::json& doc);

  bool operator==(const Schema&) const = default;

 private:
  std::vector<AttributeSpec> attributes_;
};

}  // namespace fedsyn::data

#endif  // FEDSYN_DATA_SCHEMA_H_
