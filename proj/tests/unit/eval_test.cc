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

#include <cmath>
#include <limits>

#include "fedsyn/data/dataset.h"
#include "fedsyn/eval/metrics.h"
#include "fedsyn/eval/transport.h"
#include "fedsyn/marginals/marginal.h"
#include "fedsyn/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fedsyn::eval {
namespace {

using data::AttributeSpec;
using data::DiscreteDataset;
using marginals::Pair;

// Reference solver: transportation problem on the dense bipartite graph of
// cells, solved by successive shortest paths with Bellman-Ford.
double DenseTransport(const std::vector<double>& p, const std::vector<double>& q,
                      const std::vector<std::vector<double>>& cost) {
  const size_t n = p.size();
  std::vector<double> supply = p, demand = q;
  std::vector<std::vector<double>> flow(n, std::vector<double>(n, 0.0));
  const double inf = std::numeric_limits<double>::infinity();
  for (;;) {
    // Nodes 0..n-1 sources, n..2n-1 sinks.
    std::vector<double> dist(2 * n, inf);
    std::vector<int> prev(2 * n, -1);
    for (size_t i = 0; i < n; ++i) {
      if (supply[i] > 1e-15) dist[i] = 0.0;
    }
    for (size_t iter = 0; iter < 2 * n; ++iter) {
      bool changed = false;
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          if (dist[i] + cost[i][j] < dist[n + j] - 1e-15) {
            dist[n + j] = dist[i] + cost[i][j];
            prev[n + j] = static_cast<int>(i);
            changed = true;
          }
          if (flow[i][j] > 1e-15 && dist[n + j] - cost[i][j] < dist[i] - 1e-15) {
            dist[i] = dist[n + j] - cost[i][j];
            prev[i] = static_cast<int>(n + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    int sink = -1;
    for (size_t j = 0; j < n; ++j) {
      if (demand[j] > 1e-15 && dist[n + j] < inf &&
          (sink < 0 || dist[n + j] < dist[sink])) {
        sink = static_cast<int>(n + j);
      }
    }
    if (sink < 0) break;
    double amount = demand[sink - n];
    int v = sink;
    while (prev[v] >= 0) {
      const int u = prev[v];
      if (u >= static_cast<int>(n)) amount = std::min(amount, flow[v][u - n]);
      v = u;
    }
    amount = std::min(amount, supply[v]);
    supply[v] -= amount;
    demand[sink - n] -= amount;
    v = sink;
    while (prev[v] >= 0) {
      const int u = prev[v];
      if (u < static_cast<int>(n)) {
        flow[u][v - n] += amount;
      } else {
        flow[v][u - n] -= amount;
      }
      v = u;
    }
  }
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) total += flow[i][j] * cost[i][j];
  }
  return total;
}

std::vector<std::vector<double>> PairCost(const AttributeSpec& a, const AttributeSpec& b) {
  const int sa = a.domain_size, sb = b.domain_size;
  std::vector<std::vector<double>> c(sa * sb, std::vector<double>(sa * sb));
  for (int x = 0; x < sa * sb; ++x) {
    for (int y = 0; y < sa * sb; ++y) {
      c[x][y] = AttributeCost(a.kind, sa, x / sb, y / sb) +
                AttributeCost(b.kind, sb, x % sb, y % sb);
    }
  }
  return c;
}

std::vector<double> RandomDistribution(size_t n, Rng& rng, double zero_prob = 0.3) {
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = rng.Uniform() < zero_prob ? 0.0 : rng.Exponential();
    s += x;
  }
  if (s == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= s;
  return v;
}

AttributeSpec Spec(bool numerical, int s) {
  return numerical ? testing::Numerical("n", s) : testing::Categorical("c", s);
}

TEST(AttributeCostTest, Metrics) {
  EXPECT_EQ(AttributeCost(data::AttributeKind::kNumerical, 5, 0, 4), 1.0);
  EXPECT_EQ(AttributeCost(data::AttributeKind::kNumerical, 5, 1, 2), 0.25);
  EXPECT_EQ(AttributeCost(data::AttributeKind::kCategorical, 5, 1, 4), 1.0);
  EXPECT_EQ(AttributeCost(data::AttributeKind::kCategorical, 5, 3, 3), 0.0);
}

TEST(ExactTransportTest, HandExamples) {
  const auto num = Spec(true, 2);
  EXPECT_NEAR(ExactPairTransport(std::vector<double>{1, 0, 0, 0},
                                 std::vector<double>{0, 1, 0, 0}, num, num),
              1.0, 1e-12);
  const auto cat = Spec(false, 2);
  EXPECT_NEAR(ExactPairTransport(std::vector<double>{1, 0, 0, 0},
                                 std::vector<double>{0, 0, 0, 1}, cat, cat),
              2.0, 1e-12);
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(ExactPairTransport(p, p, num, cat), 0.0);
}

// Mass confined to one row of a: the problem reduces to 1-D transport on b,
// whose cost is the L1 distance between the CDFs.
TEST(ExactTransportTest, OneDimensionalCdfClosedForm) {
  Rng rng(3);
  const auto a = Spec(true, 3);
  const auto b = Spec(true, 9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pb = RandomDistribution(9, rng);
    const auto qb = RandomDistribution(9, rng);
    std::vector<double> p(27, 0.0), q(27, 0.0);
    for (int j = 0; j < 9; ++j) {
      p[9 + j] = pb[j];
      q[9 + j] = qb[j];
    }
    double cdf = 0.0, expected = 0.0;
    for (int j = 0; j < 8; ++j) {
      cdf += pb[j] - qb[j];
      expected += std::abs(cdf) / 8.0;
    }
    EXPECT_NEAR(ExactPairTransport(p, q, a, b), expected, 1e-9);
  }
}

TEST(ExactTransportTest, MatchesDenseReferenceSolver) {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = Spec(trial % 2 == 0, 2 + static_cast<int>(rng.UniformInt(4)));
    const auto b = Spec(trial % 3 != 0, 2 + static_cast<int>(rng.UniformInt(4)));
    const size_t cells = static_cast<size_t>(a.domain_size) * b.domain_size;
    const auto p = RandomDistribution(cells, rng);
    const auto q = RandomDistribution(cells, rng);
    EXPECT_NEAR(ExactPairTransport(p, q, a, b), DenseTransport(p, q, PairCost(a, b)), 1e-9)
        << "trial " << trial;
  }
}

TEST(ExactTransportTest, IsAMetric) {
  Rng rng(11);
  const auto a = Spec(true, 4);
  const auto b = Spec(false, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = RandomDistribution(12, rng);
    const auto y = RandomDistribution(12, rng);
    const auto z = RandomDistribution(12, rng);
    const double xy = ExactPairTransport(x, y, a, b);
    EXPECT_NEAR(xy, ExactPairTransport(y, x, a, b), 1e-9);
    EXPECT_LE(ExactPairTransport(x, z, a, b),
              xy + ExactPairTransport(y, z, a, b) + 1e-9);
    EXPECT_GE(xy, 0.0);
    EXPECT_LE(xy, 2.0 + 1e-12);
  }
}

TEST(ExactTransportTest, RejectsInvalidInputs) {
  const auto a = Spec(true, 2);
  EXPECT_THROW(ExactPairTransport(std::vector<double>{0.5, 0.5, 0, 0},
                                  std::vector<double>{0.5, 0.5}, a, a),
               std::invalid_argument);
  EXPECT_THROW(ExactPairTransport(std::vector<double>{1.5, -0.5, 0, 0},
                                  std::vector<double>{1, 0, 0, 0}, a, a),
               std::invalid_argument);
  EXPECT_THROW(ExactPairTransport(std::vector<double>{0.5, 0, 0, 0},
                                  std::vector<double>{1, 0, 0, 0}, a, a),
               std::invalid_argument);
}

TEST(EntropicTransportTest, CloseToExact) {
  Rng rng(5);
  const auto a = Spec(true, 20);
  const auto b = Spec(false, 6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = RandomDistribution(120, rng, 0.0);
    const auto q = RandomDistribution(120, rng, 0.0);
    const double exact = ExactPairTransport(p, q, a, b);
    EXPECT_NEAR(EntropicPairTransport(p, q, a, b), exact, 0.05 * exact);
  }
}

TEST(NetworkSimplexTest, SmallTransportation) {
  // Two sources, three sinks.
  NetworkSimplex ns(5);
  const double cost[2][3] = {{4, 6, 9}, {5, 3, 8}};
  std::vector<int> arcs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) arcs.push_back(ns.AddArc(i, 2 + j, cost[i][j]));
  }
  ns.SetSupply(0, 5);
  ns.SetSupply(1, 6);
  ns.SetSupply(2, -3);
  ns.SetSupply(3, -4);
  ns.SetSupply(4, -4);
  // Optimum: 0->2 3, 0->4 2, 1->3 4, 1->4 2 = 12 + 18 + 12 + 16 = 58.
  EXPECT_DOUBLE_EQ(ns.Solve(), 58.0);
  int64_t shipped = 0;
  for (int arc : arcs) shipped += ns.flow(arc);
  EXPECT_EQ(shipped, 11);
}

TEST(NetworkSimplexTest, RejectsUnbalancedSupplies) {
  NetworkSimplex ns(2);
  ns.AddArc(0, 1, 1.0);
  ns.SetSupply(0, 2);
  ns.SetSupply(1, -1);
  EXPECT_THROW(ns.Solve(), std::runtime_error);
}

DiscreteDataset Constant(const data::Schema& schema, data::Code v, size_t n) {
  std::vector<std::vector<data::Code>> rows(n, std::vector<data::Code>(schema.size(), v));
  return DiscreteDataset::FromRows(schema, rows);
}

TEST(QueryTest, HandBuiltQueries) {
  const auto schema = testing::UniformSchema(1, 2);
  const auto zeros = Constant(schema, 0, 10);
  const auto ones = Constant(schema, 1, 10);
  QuerySpec q;
  q.predicates.push_back({0, {true, false}, 0, 0});
  EXPECT_EQ(AnswerQuery(zeros, q), 1.0);
  EXPECT_EQ(AnswerQuery(ones, q), 0.0);
  EXPECT_EQ(RangeQueryError(zeros, zeros, 100, 1, 1), 0.0);
}

TEST(QueryTest, GeneratedQueriesAreWellFormed) {
  std::vector<AttributeSpec> attrs = {testing::Numerical("x", 10), testing::Categorical("c", 4),
                                      testing::Numerical("y", 3), testing::Categorical("d", 2)};
  const data::Schema schema(attrs);
  const auto queries = GenerateQueries(schema, 200, 3, 8);
  ASSERT_EQ(queries.size(), 200u);
  for (const auto& q : queries) {
    ASSERT_EQ(q.predicates.size(), 3u);
    std::set<int> seen;
    for (const auto& p : q.predicates) {
      seen.insert(p.attr);
      EXPECT_EQ(static_cast<int>(p.accept.size()), schema.domain_size(p.attr));
      EXPECT_NE(std::count(p.accept.begin(), p.accept.end(), true), 0);
      if (schema.attribute(p.attr).kind == data::AttributeKind::kNumerical) {
        EXPECT_LE(p.lo, p.hi);
        for (int v = 0; v < schema.domain_size(p.attr); ++v) {
          EXPECT_EQ(p.accept[v], v >= p.lo && v <= p.hi);
        }
      }
    }
    EXPECT_EQ(seen.size(), 3u);
  }
  const auto again = GenerateQueries(schema, 200, 3, 8);
  for (size_t i = 0; i < queries.size(); ++i) {
    for (size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(again[i].predicates[j].accept, queries[i].predicates[j].accept);
    }
  }
}

TEST(QueryTest, OppositeDatasetsHaveUnitErrorOnSingleAttribute) {
  const auto schema = testing::UniformSchema(1, 2);
  // Every non-empty predicate on a binary attribute accepts {0}, {1} or both.
  const double err = RangeQueryError(Constant(schema, 0, 10), Constant(schema, 1, 10), 500, 2, 1);
  EXPECT_GT(err, 0.4);
  EXPECT_LT(err, 0.9);
}

DiscreteDataset Sample(const data::Schema& schema, size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<data::Code>> rows;
  for (size_t i = 0; i < n; ++i) {
    const auto x = static_cast<data::Code>(rng.UniformInt(5));
    const auto y = static_cast<data::Code>(rng.Uniform() < 0.6 ? x : rng.UniformInt(5));
    rows.push_back({x, y, static_cast<data::Code>(rng.UniformInt(5))});
  }
  return DiscreteDataset::FromRows(schema, rows);
}

TEST(FidelityTest, IdenticalAndResampled) {
  std::vector<AttributeSpec> attrs = {testing::Numerical("x", 5), testing::Categorical("c", 5),
                                      testing::Numerical("y", 5)};
  const data::Schema schema(attrs);
  const auto a = Sample(schema, 10000, 1);
  std::map<Pair, double> per_pair;
  EXPECT_EQ(Fidelity(a, a, &per_pair), 0.0);
  EXPECT_EQ(per_pair.size(), 3u);
  EXPECT_LE(Fidelity(a, Sample(schema, 10000, 2)), 0.05);
  EXPECT_GT(Fidelity(a, Constant(schema, 0, 100)), 0.5);
}

TEST(EvaluateTest, ReportJson) {
  const auto schema = testing::UniformSchema(3, 5);
  const auto a = Sample(schema, 500, 1);
  const auto b = Sample(schema, 500, 2);
  EvalOptions options;
  options.n_queries = 50;
  const auto report = Evaluate(a, b, options);
  const auto doc = report.ToJson();
  EXPECT_EQ(doc["query_error"].get<double>(), report.query_error);
  EXPECT_EQ(doc["per_pair"].size(), 3u);
  EXPECT_TRUE(doc["per_pair"].contains("0,2"));
  options.fidelity = false;
  EXPECT_EQ(Evaluate(a, b, options).fidelity_error, 0.0);
  EXPECT_EQ(EvalOptions::FromJson(options.ToJson()).n_queries, 50);
}

}  // namespace
}  // namespace fedsyn::eval
