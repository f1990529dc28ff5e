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

#include "fedsyn/eval/transport.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace fedsyn::eval {

namespace {
constexpr int8_t kUp = 1;
constexpr int8_t kDown = -1;
constexpr int64_t kInf = std::numeric_limits<int64_t>::max();
constexpr double kSupplyScale = 1e12;
}  // namespace

NetworkSimplex::NetworkSimplex(int num_nodes)
    : n_(num_nodes), supply_(num_nodes, 0) {
  if (num_nodes < 1) throw std::invalid_argument("network needs a node");
}

int NetworkSimplex::AddArc(int source, int target, double cost) {
  if (source < 0 || source >= n_ || target < 0 || target >= n_) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (!(cost >= 0.0)) throw std::invalid_argument("arc costs must be >= 0");
  src_.push_back(source);
  tgt_.push_back(target);
  cost_.push_back(cost);
  return m_++;
}

void NetworkSimplex::SetSupply(int node, int64_t supply) {
  supply_.at(node) = supply;
}

void NetworkSimplex::Detach(int u) {
  const int p = parent_[u];
  if (prev_sib_[u] >= 0) {
    next_sib_[prev_sib_[u]] = next_sib_[u];
  } else {
    first_child_[p] = next_sib_[u];
  }
  if (next_sib_[u] >= 0) prev_sib_[next_sib_[u]] = prev_sib_[u];
  prev_sib_[u] = next_sib_[u] = -1;
}

void NetworkSimplex::Attach(int u, int parent) {
  parent_[u] = parent;
  prev_sib_[u] = -1;
  next_sib_[u] = first_child_[parent];
  if (next_sib_[u] >= 0) prev_sib_[next_sib_[u]] = u;
  first_child_[parent] = u;
}

double NetworkSimplex::Solve() {
  int64_t total = 0;
  for (int64_t s : supply_) total += s;
  if (total != 0) throw std::runtime_error("supplies must sum to zero");

  const int root = n_;
  const int all_arcs = m_ + n_;
  double max_cost = 0.0;
  for (double c : cost_) max_cost = std::max(max_cost, c);
  const double art_cost = (max_cost + 1.0) * (n_ + 1);

  src_.resize(all_arcs);
  tgt_.resize(all_arcs);
  cost_.resize(all_arcs);
  flow_.assign(all_arcs, 0);
  in_tree_.assign(all_arcs, 0);
  pi_.assign(n_ + 1, 0.0);
  parent_.assign(n_ + 1, -1);
  pred_.assign(n_ + 1, -1);
  depth_.assign(n_ + 1, 0);
  dir_.assign(n_ + 1, kUp);
  first_child_.assign(n_ + 1, -1);
  next_sib_.assign(n_ + 1, -1);
  prev_sib_.assign(n_ + 1, -1);

  // Artificial star: sources drain to the root at zero cost, sinks are fed
  // from the root at a prohibitive cost.
  for (int u = 0; u < n_; ++u) {
    const int e = m_ + u;
    if (supply_[u] >= 0) {
      src_[e] = u;
      tgt_[e] = root;
      cost_[e] = 0.0;
      flow_[e] = supply_[u];
      dir_[u] = kUp;
      pi_[u] = 0.0;
    } else {
      src_[e] = root;
      tgt_[e] = u;
      cost_[e] = art_cost;
      flow_[e] = -supply_[u];
      dir_[u] = kDown;
      pi_[u] = art_cost;
    }
    in_tree_[e] = 1;
    pred_[u] = e;
    depth_[u] = 1;
    Attach(u, root);
  }

  block_ = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(m_))));
  next_arc_ = 0;
  pivots_ = 0;
  while (FindEntering()) {
    Pivot();
    ++pivots_;
  }

  for (int u = 0; u < n_; ++u) {
    if (flow_[m_ + u] != 0) throw std::runtime_error("transport infeasible");
  }
  double objective = 0.0;
  for (int e = 0; e < m_; ++e) {
    if (flow_[e] != 0) objective += static_cast<double>(flow_[e]) * cost_[e];
  }
  src_.resize(m_);
  tgt_.resize(m_);
  cost_.resize(m_);
  return objective;
}

bool NetworkSimplex::FindEntering() {
  constexpr double kEps = 1e-10;
  if (m_ == 0) return false;
  double best = -kEps;
  int found = -1;
  int count = block_;
  for (int i = 0; i < m_; ++i) {
    const int e = (next_arc_ + i) % m_;
    if (!in_tree_[e]) {
      const double rc = cost_[e] + pi_[src_[e]] - pi_[tgt_[e]];
      if (rc < best) {
        best = rc;
        found = e;
      }
    }
    if (--count == 0) {
      if (found >= 0) {
        next_arc_ = (e + 1) % m_;
        in_arc_ = found;
        return true;
      }
      count = block_;
    }
  }
  if (found < 0) return false;
  in_arc_ = found;
  return true;
}

int NetworkSimplex::FindJoin(int u, int v) const {
  while (u != v) {
    if (depth_[u] > depth_[v]) {
      u = parent_[u];
    } else if (depth_[v] > depth_[u]) {
      v = parent_[v];
    } else {
      u = parent_[u];
      v = parent_[v];
    }
  }
  return u;
}

void NetworkSimplex::Pivot() {
  const int e_in = in_arc_;
  const int first = src_[e_in];
  const int second = tgt_[e_in];
  const int join = FindJoin(first, second);

  // Flow runs first -> second over the entering arc, then second up to the
  // join and down again to first. Only arcs traversed backwards can block.
  int64_t delta = kInf;
  int u_out = -1;
  int side = 0;
  for (int u = first; u != join; u = parent_[u]) {
    const int64_t d = dir_[u] == kUp ? flow_[pred_[u]] : kInf;
    if (d < delta) {
      delta = d;
      u_out = u;
      side = 1;
    }
  }
  for (int u = second; u != join; u = parent_[u]) {
    const int64_t d = dir_[u] == kDown ? flow_[pred_[u]] : kInf;
    if (d <= delta && d != kInf) {
      delta = d;
      u_out = u;
      side = 2;
    }
  }
  if (side == 0) throw std::runtime_error("unbounded transport problem");

  if (delta > 0) {
    flow_[e_in] += delta;
    for (int u = first; u != join; u = parent_[u]) flow_[pred_[u]] -= dir_[u] * delta;
    for (int u = second; u != join; u = parent_[u]) flow_[pred_[u]] += dir_[u] * delta;
  }
  const int u_in = side == 1 ? first : second;
  const int v_in = side == 1 ? second : first;
  in_tree_[pred_[u_out]] = 0;
  in_tree_[e_in] = 1;

  // Re-hang the subtree of u_out below v_in, reversing the stem u_in..u_out.
  std::vector<int> stem;
  for (int u = u_in;; u = parent_[u]) {
    stem.push_back(u);
    if (u == u_out) break;
  }
  std::vector<int> old_pred(stem.size());
  std::vector<int8_t> old_dir(stem.size());
  for (size_t i = 0; i < stem.size(); ++i) {
    old_pred[i] = pred_[stem[i]];
    old_dir[i] = dir_[stem[i]];
    Detach(stem[i]);
  }
  pred_[u_in] = e_in;
  dir_[u_in] = u_in == src_[e_in] ? kUp : kDown;
  Attach(u_in, v_in);
  for (size_t i = 1; i < stem.size(); ++i) {
    pred_[stem[i]] = old_pred[i - 1];
    dir_[stem[i]] = static_cast<int8_t>(-old_dir[i - 1]);
    Attach(stem[i], stem[i - 1]);
  }

  // Shift potentials of the moved subtree and refresh depths.
  const double sigma = pi_[v_in] - pi_[u_in] - dir_[u_in] * cost_[e_in];
  std::vector<int> todo = {u_in};
  while (!todo.empty()) {
    const int u = todo.back();
    todo.pop_back();
    pi_[u] += sigma;
    depth_[u] = depth_[parent_[u]] + 1;
    for (int c = first_child_[u]; c >= 0; c = next_sib_[c]) todo.push_back(c);
  }
}

double AttributeCost(data::AttributeKind kind, int s, int x, int y) {
  if (x == y) return 0.0;
  if (kind == data::AttributeKind::kCategorical) return 1.0;
  return s <= 1 ? 0.0 : std::abs(x - y) / static_cast<double>(s - 1);
}

namespace {

struct AxisGraph {
  int nodes = 0;  // Real values first, then an optional hub.
  struct Edge {
    int x, y;
    double cost;
  };
  std::vector<Edge> edges;
};

AxisGraph MetricGraph(const data::AttributeSpec& spec) {
  AxisGraph g;
  const int s = spec.domain_size;
  g.nodes = s;
  if (s <= 1) return g;
  if (spec.kind == data::AttributeKind::kNumerical) {
    const double step = 1.0 / (s - 1);
    for (int i = 0; i + 1 < s; ++i) g.edges.push_back({i, i + 1, step});
  } else {
    g.nodes = s + 1;
    for (int i = 0; i < s; ++i) g.edges.push_back({i, s, 0.5});
  }
  return g;
}

void CheckDistribution(std::span<const double> p, size_t cells) {
  if (p.size() != cells) throw std::invalid_argument("distribution length mismatch");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument("distribution has negative mass");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("distribution does not sum to one");
  }
}

std::vector<int64_t> ScaledMass(std::span<const double> p) {
  std::vector<int64_t> out(p.size());
  double sum = 0.0;
  for (double x : p) sum += x;
  for (size_t i = 0; i < p.size(); ++i) out[i] = std::llround(p[i] / sum * kSupplyScale);
  return out;
}

}  // namespace

double ExactPairTransport(std::span<const double> p, std::span<const double> q,
                          const data::AttributeSpec& a,
                          const data::AttributeSpec& b) {
  const size_t cells = static_cast<size_t>(a.domain_size) * b.domain_size;
  CheckDistribution(p, cells);
  CheckDistribution(q, cells);
  const AxisGraph ga = MetricGraph(a);
  const AxisGraph gb = MetricGraph(b);
  auto id = [&](int x, int y) { return x * gb.nodes + y; };

  NetworkSimplex ns(ga.nodes * gb.nodes);
  for (const auto& e : ga.edges) {
    for (int y = 0; y < gb.nodes; ++y) {
      ns.AddArc(id(e.x, y), id(e.y, y), e.cost);
      ns.AddArc(id(e.y, y), id(e.x, y), e.cost);
    }
  }
  for (const auto& e : gb.edges) {
    for (int x = 0; x < ga.nodes; ++x) {
      ns.AddArc(id(x, e.x), id(x, e.y), e.cost);
      ns.AddArc(id(x, e.y), id(x, e.x), e.cost);
    }
  }

  const auto mp = ScaledMass(p);
  const auto mq = ScaledMass(q);
  std::vector<int64_t> supply(cells);
  int64_t residual = 0;
  size_t largest = 0;
  for (size_t c = 0; c < cells; ++c) {
    supply[c] = mp[c] - mq[c];
    residual += supply[c];
    if (std::llabs(supply[c]) > std::llabs(supply[largest])) largest = c;
  }
  supply[largest] -= residual;  // Rounding leftovers, at most a few units.
  const int s_b = b.domain_size;
  for (size_t c = 0; c < cells; ++c) {
    const int x = static_cast<int>(c) / s_b;
    const int y = static_cast<int>(c) % s_b;
    ns.SetSupply(id(x, y), supply[c]);
  }
  return ns.Solve() / kSupplyScale;
}

double EntropicPairTransport(std::span<const double> p, std::span<const double> q,
                             const data::AttributeSpec& a,
                             const data::AttributeSpec& b, double reg,
                             int iterations) {
  if (!(reg > 0.0) || iterations < 1) {
    throw std::invalid_argument("reg must be positive, iterations >= 1");
  }
  const int sa = a.domain_size;
  const int sb = b.domain_size;
  const size_t cells = static_cast<size_t>(sa) * sb;
  CheckDistribution(p, cells);
  CheckDistribution(q, cells);

  // Factor matrices: K = exp(-C/reg) and KC = K o C for each attribute.
  auto factors = [reg](const data::AttributeSpec& spec, std::vector<double>& k,
                       std::vector<double>& kc) {
    const int s = spec.domain_size;
    k.resize(static_cast<size_t>(s) * s);
    kc.resize(k.size());
    for (int x = 0; x < s; ++x) {
      for (int y = 0; y < s; ++y) {
        const double c = AttributeCost(spec.kind, s, x, y);
        k[x * s + y] = std::exp(-c / reg);
        kc[x * s + y] = k[x * s + y] * c;
      }
    }
  };
  std::vector<double> ka, kca, kb, kcb;
  factors(a, ka, kca);
  factors(b, kb, kcb);

  // out = A * V * B for symmetric s x s factors A (sa) and B (sb).
  std::vector<double> tmp(cells);
  auto apply = [&](const std::vector<double>& fa, const std::vector<double>& fb,
                   const std::vector<double>& v, std::vector<double>& out) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i = 0; i < sa; ++i) {
      for (int l = 0; l < sa; ++l) {
        const double w = fa[i * sa + l];
        if (w == 0.0) continue;
        const double* vr = &v[static_cast<size_t>(l) * sb];
        double* tr = &tmp[static_cast<size_t>(i) * sb];
        for (int j = 0; j < sb; ++j) tr[j] += w * vr[j];
      }
    }
    out.assign(cells, 0.0);
    for (int i = 0; i < sa; ++i) {
      const double* tr = &tmp[static_cast<size_t>(i) * sb];
      double* orow = &out[static_cast<size_t>(i) * sb];
      for (int m = 0; m < sb; ++m) {
        const double w = tr[m];
        if (w == 0.0) continue;
        const double* br = &fb[static_cast<size_t>(m) * sb];
        for (int j = 0; j < sb; ++j) orow[j] += w * br[j];
      }
    }
  };

  constexpr double kTiny = 1e-300;
  std::vector<double> u(cells, 1.0), v(cells, 1.0), kv;
  for (int it = 0; it < iterations; ++it) {
    apply(ka, kb, v, kv);
    for (size_t c = 0; c < cells; ++c) u[c] = p[c] / std::max(kv[c], kTiny);
    apply(ka, kb, u, kv);
    for (size_t c = 0; c < cells; ++c) v[c] = q[c] / std::max(kv[c], kTiny);
  }
  // <pi, C> = u . ((KC_a (x) K_b) v) + u . ((K_a (x) KC_b) v).
  std::vector<double> t1, t2;
  apply(kca, kb, v, t1);
  apply(ka, kcb, v, t2);
  double cost = 0.0;
  for (size_t c = 0; c < cells; ++c) cost += u[c] * (t1[c] + t2[c]);
  return cost;
}

}  // namespace fedsyn::eval
