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

#ifndef FEDSYN_EVAL_TRANSPORT_H_
#define FEDSYN_EVAL_TRANSPORT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedsyn/data/schema.h"

namespace fedsyn::eval {

// Uncapacitated min-cost flow by the primal network simplex method with
// block-search pivoting. Supplies are integral (positive = source) and must
// sum to zero; arc costs must be nonnegative.
class NetworkSimplex {
 public:
  explicit NetworkSimplex(int num_nodes);

  int AddArc(int source, int target, double cost);
  void SetSupply(int node, int64_t supply);

  // Solves and returns sum(flow * cost). Throws std::runtime_error if the
  // supplies are unbalanced.
  double Solve();
  int64_t flow(int arc) const { return flow_[arc]; }
  int num_pivots() const { return pivots_; }

 private:
  bool FindEntering();
  int FindJoin(int u, int v) const;
  void Pivot();
  void Detach(int u);
  void Attach(int u, int parent);

  int n_;
  int m_ = 0;
  std::vector<int> src_, tgt_;
  std::vector<double> cost_;
  std::vector<int64_t> supply_;

  // Solver state (arcs m_.. m_+n_-1 are artificial, node n_ is the root).
  std::vector<int64_t> flow_;
  std::vector<int8_t> in_tree_;
  std::vector<double> pi_;
  std::vector<int> parent_, pred_, depth_;
  std::vector<int8_t> dir_;  // +1: pred arc points to the parent.
  std::vector<int> first_child_, next_sib_, prev_sib_;
  int next_arc_ = 0;
  int block_ = 1;
  int in_arc_ = -1;
  int pivots_ = 0;
};

// Per-attribute ground metric: a path with unit length 1/(s-1) for numerical
// attributes and the discrete metric for categorical ones.
double AttributeCost(data::AttributeKind kind, int s, int x, int y);

// Exact W1 between two distributions over the cells of an attribute pair
// (row-major, a outer). The ground cost is the sum of the two attribute
// metrics; solved as min-cost flow on the product of the metric graphs.
double ExactPairTransport(std::span<const double> p, std::span<const double> q,
                          const data::AttributeSpec& a,
                          const data::AttributeSpec& b);

// Entropy-regularized transport cost <pi, C> after Sinkhorn scaling, using
// the separable kernel K = K_a (x) K_b.
double EntropicPairTransport(std::span<const double> p, std::span<const double> q,
                             const data::AttributeSpec& a,
                             const data::AttributeSpec& b, double reg = 0.01,
                             int iterations = 500);

}  // namespace fedsyn::eval

#endif  // FEDSYN_EVAL_TRANSPORT_H_
