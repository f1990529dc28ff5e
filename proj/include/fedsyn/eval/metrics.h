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

#ifndef FEDSYN_EVAL_METRICS_H_
#define FEDSYN_EVAL_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/marginal.h"
#include "json.hpp"

namespace fedsyn::eval {

// Cells of an attribute pair above which the entropic solver takes over.
inline constexpr size_t kExactTransportMaxCells = 10000;

// One predicate: the accepted codes of one attribute. Categorical predicates
// come from a random key set, numerical ones from an inclusive interval.
struct Predicate {
  int attr = 0;
  std::vector<bool> accept;
  int lo = 0;  // Interval bounds, numerical attributes only.
  int hi = 0;
};

struct QuerySpec {
  std::vector<Predicate> predicates;
};

std::vector<QuerySpec> GenerateQueries(const data::Schema& schema, int n_queries,
                                       int attrs_per_query, uint64_t seed);

// Fraction of rows satisfying every predicate.
double AnswerQuery(const data::DiscreteDataset& ds, const QuerySpec& query);

double RangeQueryError(const data::DiscreteDataset& org,
                       const data::DiscreteDataset& syn, int n_queries = 1000,
                       uint64_t seed = 0, int attrs_per_query = 3);

// W1 between two distributions over the cells of `pair`.
double WassersteinPair(std::span<const double> p, std::span<const double> q,
                       marginals::Pair pair, const data::Schema& schema);

// Mean pairwise W1 over all attribute pairs; per-pair values optional.
double Fidelity(const data::DiscreteDataset& org, const data::DiscreteDataset& syn,
                std::map<marginals::Pair, double>* per_pair = nullptr);

struct EvalOptions {
  int n_queries = 1000;
  int attrs_per_query = 3;
  uint64_t seed = 0;
  bool fidelity = true;

  nlohmann::json ToJson() const;
  static EvalOptions FromJson(const nlohmann::json& doc);
};

struct EvalReport {
  double query_error = 0.0;
  double fidelity_error = 0.0;
  std::map<marginals::Pair, double> per_pair_breakdown;

  // {"query_error", "fidelity_error", "per_pair": {"a,b": w}}
  nlohmann::json ToJson() const;
};

EvalReport Evaluate(const data::DiscreteDataset& org,
                    const data::DiscreteDataset& syn, const EvalOptions& options);

}  // namespace fedsyn::eval

#endif  // FEDSYN_EVAL_METRICS_H_
