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

#ifndef FEDSYN_MARGINALS_MARGINAL_H_
#define FEDSYN_MARGINALS_MARGINAL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "json.hpp"

namespace fedsyn::marginals {

// Attribute pair with a < b.
struct Pair {
  int a = 0;
  int b = 1;

  auto operator<=>(const Pair&) const = default;
  bool SharesAttribute(const Pair& other) const {
    return a == other.a || a == other.b || b == other.a || b == other.b;
  }
  // "a,b", the key used in JSON documents.
  std::string Key() const;
  static Pair FromKey(std::string_view key);
};

// All d(d-1)/2 pairs in lexicographic order.
std::vector<Pair> AllPairs(int d);

// Normalized frequency vector over one attribute, or over an attribute pair
// flattened row-major (index i * s_b + j).
struct Marginal {
  std::vector<int> attrs;
  std::vector<double> values;
  bool normalized = true;

  bool is_pair() const { return attrs.size() == 2; }
  Pair pair() const { return {attrs.at(0), attrs.at(1)}; }

  // {"attrs":[a] | [a,b], "values":[...]}
  nlohmann::json ToJson() const;
  static Marginal FromJson(const nlohmann::json& doc);
};

Marginal OneWay(const data::DiscreteDataset& ds, int a);
Marginal TwoWay(const data::DiscreteDataset& ds, Pair pair);

// Unnormalized cell counts of TwoWay.
std::vector<int64_t> TwoWayCounts(const data::DiscreteDataset& ds, Pair pair);

// values[i * s_b + j] = m_a[i] * m_b[j]. Lengths are checked against the
// schema's domain sizes.
Marginal OuterProduct(const Marginal& m_a, const Marginal& m_b,
                      const data::Schema& schema);

// ||m_ab - m_a x m_b||_2.
double InDif2Exact(const Marginal& m_ab, const Marginal& m_a,
                   const Marginal& m_b, const data::Schema& schema);

double L2Norm(std::span<const double> v);
double SquaredL2Distance(std::span<const double> x, std::span<const double> y);
double TotalVariation(std::span<const double> p, std::span<const double> q);

// Clips negative cells to zero and renormalizes to sum one; an all-zero
// result falls back to uniform.
std::vector<double> ProjectToSimplexByClipping(std::span<const double> v);

}  // namespace fedsyn::marginals

#endif  // FEDSYN_MARGINALS_MARGINAL_H_
