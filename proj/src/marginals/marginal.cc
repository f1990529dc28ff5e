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

#include "fedsyn/marginals/marginal.h"

#include <cmath>
#include <stdexcept>

namespace fedsyn::marginals {

std::string Pair::Key() const {
  return std::to_string(a) + "," + std::to_string(b);
}

Pair Pair::FromKey(std::string_view key) {
  const auto comma = key.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("bad pair key: " + std::string(key));
  }
  Pair p{std::stoi(std::string(key.substr(0, comma))),
         std::stoi(std::string(key.substr(comma + 1)))};
  if (!(p.a < p.b)) throw std::invalid_argument("pair key needs a < b");
  return p;
}

std::vector<Pair> AllPairs(int d) {
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(d) * (d - 1) / 2);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) pairs.push_back({a, b});
  }
  return pairs;
}

nlohmann::json Marginal::ToJson() const {
  return {{"attrs", attrs}, {"values", values}};
}

Marginal Marginal::FromJson(const nlohmann::json& doc) {
  Marginal m;
  m.attrs = doc.at("attrs").get<std::vector<int>>();
  m.values = doc.at("values").get<std::vector<double>>();
  if (m.attrs.empty() || m.attrs.size() > 2) {
    throw std::invalid_argument("marginal needs one or two attributes");
  }
  return m;
}

Marginal OneWay(const data::DiscreteDataset& ds, int a) {
  if (a < 0 || static_cast<size_t>(a) >= ds.num_attributes()) {
    throw std::out_of_range("attribute index out of range");
  }
  Marginal m{{a}, std::vector<double>(ds.schema().domain_size(a), 0.0), true};
  std::vector<int64_t> counts(m.values.size(), 0);
  for (data::Code v : ds.column(a)) ++counts[v];
  const double n = static_cast<double>(ds.num_rows());
  for (size_t i = 0; i < counts.size(); ++i) m.values[i] = counts[i] / n;
  return m;
}

std::vector<int64_t> TwoWayCounts(const data::DiscreteDataset& ds, Pair pair) {
  if (!(pair.a >= 0 && pair.a < pair.b &&
        static_cast<size_t>(pair.b) < ds.num_attributes())) {
    throw std::out_of_range("pair must satisfy 0 <= a < b < d");
  }
  const int s_b = ds.schema().domain_size(pair.b);
  std::vector<int64_t> counts(
      static_cast<size_t>(ds.schema().domain_size(pair.a)) * s_b, 0);
  const auto col_a = ds.column(pair.a);
  const auto col_b = ds.column(pair.b);
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    ++counts[static_cast<size_t>(col_a[r]) * s_b + col_b[r]];
  }
  return counts;
}

Marginal TwoWay(const data::DiscreteDataset& ds, Pair pair) {
  const auto counts = TwoWayCounts(ds, pair);
  Marginal m{{pair.a, pair.b}, std::vector<double>(counts.size()), true};
  const double n = static_cast<double>(ds.num_rows());
  for (size_t i = 0; i < counts.size(); ++i) m.values[i] = counts[i] / n;
  return m;
}

Marginal OuterProduct(const Marginal& m_a, const Marginal& m_b,
                      const data::Schema& schema) {
  if (m_a.attrs.size() != 1 || m_b.attrs.size() != 1) {
    throw std::invalid_argument("outer product needs two 1-way marginals");
  }
  if (m_a.attrs[0] == m_b.attrs[0]) {
    throw std::invalid_argument("outer product needs distinct attributes");
  }
  if (m_a.values.size() != static_cast<size_t>(schema.domain_size(m_a.attrs[0])) ||
      m_b.values.size() != static_cast<size_t>(schema.domain_size(m_b.attrs[0]))) {
    throw std::invalid_argument("marginal length does not match schema");
  }
  Marginal out{{m_a.attrs[0], m_b.attrs[0]},
               std::vector<double>(m_a.values.size() * m_b.values.size()),
               m_a.normalized && m_b.normalized};
  const size_t s_b = m_b.values.size();
  for (size_t i = 0; i < m_a.values.size(); ++i) {
    for (size_t j = 0; j < s_b; ++j) {
      out.values[i * s_b + j] = m_a.values[i] * m_b.values[j];
    }
  }
  return out;
}

double InDif2Exact(const Marginal& m_ab, const Marginal& m_a,
                   const Marginal& m_b, const data::Schema& schema) {
  const Marginal product = OuterProduct(m_a, m_b, schema);
  if (m_ab.values.size() != product.values.size()) {
    throw std::invalid_argument("2-way marginal shape mismatch");
  }
  return std::sqrt(SquaredL2Distance(m_ab.values, product.values));
}

double L2Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double SquaredL2Distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return s;
}

double TotalVariation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

std::vector<double> ProjectToSimplexByClipping(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  double total = 0.0;
  for (auto& x : out) {
    if (!(x > 0.0)) x = 0.0;
    total += x;
  }
  if (total <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return out;
  }
  for (auto& x : out) x /= total;
  return out;
}

}  // namespace fedsyn::marginals
