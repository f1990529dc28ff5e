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

#include "fedsyn/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedsyn/eval/transport.h"
#include "fedsyn/rng.h"

namespace fedsyn::eval {

namespace {

void RequireSameSchema(const data::DiscreteDataset& x,
                       const data::DiscreteDataset& y) {
  if (!(x.schema() == y.schema())) {
    throw std::invalid_argument("datasets do not share a schema");
  }
}

}  // namespace

std::vector<QuerySpec> GenerateQueries(const data::Schema& schema, int n_queries,
                                       int attrs_per_query, uint64_t seed) {
  if (n_queries < 0 || attrs_per_query < 1) {
    throw std::invalid_argument("bad query parameters");
  }
  const int d = static_cast<int>(schema.size());
  const int arity = std::min(attrs_per_query, d);
  Rng rng(DeriveSeed(seed, {0x71756572ULL}));
  std::vector<int> attrs(d);
  std::vector<QuerySpec> out(n_queries);
  for (auto& query : out) {
    std::iota(attrs.begin(), attrs.end(), 0);
    // Partial Fisher-Yates: the first `arity` slots are the sample.
    for (int i = 0; i < arity; ++i) {
      const int j = i + static_cast<int>(rng.UniformInt(d - i));
      std::swap(attrs[i], attrs[j]);
    }
    for (int i = 0; i < arity; ++i) {
      const auto& spec = schema.attribute(attrs[i]);
      const int s = spec.domain_size;
      Predicate pred;
      pred.attr = attrs[i];
      pred.accept.assign(s, false);
      if (spec.kind == data::AttributeKind::kCategorical) {
        bool any = false;
        while (!any) {
          for (int v = 0; v < s; ++v) {
            pred.accept[v] = rng.UniformInt(2) == 1;
            any = any || pred.accept[v];
          }
        }
      } else {
        const int x = static_cast<int>(rng.UniformInt(s));
        const int y = static_cast<int>(rng.UniformInt(s));
        pred.lo = std::min(x, y);
        pred.hi = std::max(x, y);
        for (int v = pred.lo; v <= pred.hi; ++v) pred.accept[v] = true;
      }
      query.predicates.push_back(std::move(pred));
    }
  }
  return out;
}

double AnswerQuery(const data::DiscreteDataset& ds, const QuerySpec& query) {
  if (ds.num_rows() == 0) return 0.0;
  std::vector<uint8_t> hit(ds.num_rows(), 1);
  for (const auto& pred : query.predicates) {
    const auto col = ds.column(pred.attr);
    for (size_t r = 0; r < col.size(); ++r) {
      hit[r] &= static_cast<uint8_t>(pred.accept[col[r]]);
    }
  }
  size_t count = 0;
  for (uint8_t h : hit) count += h;
  return static_cast<double>(count) / static_cast<double>(ds.num_rows());
}

double RangeQueryError(const data::DiscreteDataset& org,
                       const data::DiscreteDataset& syn, int n_queries,
                       uint64_t seed, int attrs_per_query) {
  RequireSameSchema(org, syn);
  const auto queries = GenerateQueries(org.schema(), n_queries, attrs_per_query, seed);
  if (queries.empty()) return 0.0;
  double total = 0.0;
  for (const auto& q : queries) total += std::abs(AnswerQuery(syn, q) - AnswerQuery(org, q));
  return total / static_cast<double>(queries.size());
}

double WassersteinPair(std::span<const double> p, std::span<const double> q,
                       marginals::Pair pair, const data::Schema& schema) {
  const auto& a = schema.attribute(pair.a);
  const auto& b = schema.attribute(pair.b);
  const size_t cells = static_cast<size_t>(a.domain_size) * b.domain_size;
  if (cells <= kExactTransportMaxCells) return ExactPairTransport(p, q, a, b);
  return EntropicPairTransport(p, q, a, b);
}

double Fidelity(const data::DiscreteDataset& org, const data::DiscreteDataset& syn,
                std::map<marginals::Pair, double>* per_pair) {
  RequireSameSchema(org, syn);
  const auto pairs = marginals::AllPairs(static_cast<int>(org.num_attributes()));
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& pair : pairs) {
    const auto p = marginals::TwoWay(syn, pair).values;
    const auto q = marginals::TwoWay(org, pair).values;
    const double w = p == q ? 0.0 : WassersteinPair(p, q, pair, org.schema());
    if (per_pair != nullptr) (*per_pair)[pair] = w;
    total += w;
  }
  return total / static_cast<double>(pairs.size());
}

nlohmann::json EvalOptions::ToJson() const {
  return {{"n_queries", n_queries},
          {"attrs_per_query", attrs_per_query},
          {"seed", seed},
          {"fidelity", fidelity}};
}

EvalOptions EvalOptions::FromJson(const nlohmann::json& doc) {
  EvalOptions o;
  o.n_queries = doc.value("n_queries", o.n_queries);
  o.attrs_per_query = doc.value("attrs_per_query", o.attrs_per_query);
  o.seed = doc.value("seed", o.seed);
  o.fidelity = doc.value("fidelity", o.fidelity);
  return o;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json per_pair = nlohmann::json::object();
  for (const auto& [pair, w] : per_pair_breakdown) per_pair[pair.Key()] = w;
  return {{"query_error", query_error},
          {"fidelity_error", fidelity_error},
          {"per_pair", std::move(per_pair)}};
}

EvalReport Evaluate(const data::DiscreteDataset& org,
                    const data::DiscreteDataset& syn, const EvalOptions& options) {
  EvalReport report;
  report.query_error = RangeQueryError(org, syn, options.n_queries, options.seed,
                                       options.attrs_per_query);
  if (options.fidelity) {
    report.fidelity_error = Fidelity(org, syn, &report.per_pair_breakdown);
  }
  return report;
}

}  // namespace fedsyn::eval
