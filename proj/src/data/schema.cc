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

#include "fedsyn/data/schema.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fedsyn::data {

std::string_view KindName(AttributeKind kind) {
  return kind == AttributeKind::kNumerical ? "numerical" : "categorical";
}

AttributeKind ParseKind(std::string_view name) {
  if (name == "numerical") return AttributeKind::kNumerical;
  if (name == "categorical") return AttributeKind::kCategorical;
  throw std::invalid_argument("unknown attribute kind: " + std::string(name));
}

void AttributeSpec::Validate() const {
  if (domain_size < 1) {
    throw std::invalid_argument("attribute '" + name +
                                "': domain_size must be >= 1");
  }
  if (kind == AttributeKind::kNumerical) {
    if (!category_labels.empty()) {
      throw std::invalid_argument("attribute '" + name +
                                  "': numerical attribute has labels");
    }
    if (bin_edges.size() != static_cast<size_t>(domain_size) + 1) {
      throw std::invalid_argument("attribute '" + name +
                                  "': expected domain_size + 1 bin edges");
    }
    for (size_t i = 1; i < bin_edges.size(); ++i) {
      if (!(bin_edges[i] > bin_edges[i - 1]) || !std::isfinite(bin_edges[i])) {
        throw std::invalid_argument("attribute '" + name +
                                    "': bin edges must be strictly ascending");
      }
    }
  } else {
    if (!bin_edges.empty()) {
      throw std::invalid_argument("attribute '" + name +
                                  "': categorical attribute has bin edges");
    }
    if (category_labels.size() != static_cast<size_t>(domain_size)) {
      throw std::invalid_argument("attribute '" + name +
                                  "': expected domain_size labels");
    }
  }
}

std::string AttributeSpec::Decode(int code) const {
  if (code < 0 || code >= domain_size) {
    throw std::out_of_range("attribute '" + name + "': code out of range");
  }
  if (kind == AttributeKind::kCategorical) return category_labels[code];
  const double mid = 0.5 * (bin_edges[code] + bin_edges[code + 1]);
  std::ostringstream os;
  os.precision(10);
  os << mid;
  return os.str();
}

Schema::Schema(std::vector<AttributeSpec> attributes)
    : attributes_(std::move(attributes)) {
  for (const auto& spec : attributes_) spec.Validate();
}

size_t Schema::IndexOf(std::string_view name) const {
  for (size_t a = 0; a < attributes_.size(); ++a) {
    if (attributes_[a].name == name) return a;
  }
  throw std::out_of_range("unknown attribute: " + std::string(name));
}

nlohmann::json Schema::ToJson() const {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& spec : attributes_) {
    nlohmann::json entry = {{"name", spec.name},
                            {"kind", KindName(spec.kind)},
                            {"domain_size", spec.domain_size}};
    if (spec.kind == AttributeKind::kNumerical) {
      entry["bin_edges"] = spec.bin_edges;
    } else {
      entry["category_labels"] = spec.category_labels;
    }
    attrs.push_back(std::move(entry));
  }
  return {{"attributes", std::move(attrs)}};
}

Schema Schema::FromJson(const nlohmann::json& doc) {
  std::vector<AttributeSpec> attrs;
  for (const auto& entry : doc.at("attributes")) {
    AttributeSpec spec;
    spec.name = entry.at("name").get<std::string>();
    spec.kind = ParseKind(entry.at("kind").get<std::string>());
    spec.domain_size = entry.at("domain_size").get<int>();
    if (entry.contains("bin_edges")) {
      spec.bin_edges = entry["bin_edges"].get<std::vector<double>>();
    }
    if (entry.contains("category_labels")) {
      spec.category_labels =
          entry["category_labels"].get<std::vector<std::string>>();
    }
    attrs.push_back(std::move(spec));
  }
  return Schema(std::move(attrs));
}

}  // namespace fedsyn::data
