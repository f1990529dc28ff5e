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

#include "fedsyn/data/dataset.h"
#include "fedsyn/marginals/marginal.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fedsyn::marginals {
namespace {

using data::DiscreteDataset;
using testing::UniformSchema;

std::vector<double> V(std::initializer_list<double> xs) { return xs; }

TEST(MarginalTest, OneWayCounts) {
  const auto schema = UniformSchema(1, 2);
  EXPECT_EQ(OneWay(DiscreteDataset::FromRows(schema, {{0}, {0}, {1}, {1}}), 0).values,
            V({0.5, 0.5}));
  EXPECT_EQ(OneWay(DiscreteDataset::FromRows(schema, {{0}, {0}, {0}, {1}}), 0).values,
            V({0.75, 0.25}));
  EXPECT_EQ(OneWay(DiscreteDataset::FromRows(UniformSchema(1, 3), {{0}, {0}}), 0).values,
            V({1, 0, 0}));
}

TEST(MarginalTest, TwoWayCounts) {
  const auto schema = UniformSchema(2, 2);
  EXPECT_EQ(TwoWay(DiscreteDataset::FromRows(schema, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}),
                   {0, 1})
                .values,
            V({0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(TwoWay(DiscreteDataset::FromRows(schema, {{0, 0}, {0, 0}, {1, 1}, {1, 1}}),
                   {0, 1})
                .values,
            V({0.5, 0, 0, 0.5}));
  EXPECT_EQ(TwoWay(DiscreteDataset::FromRows(schema, {{1, 0}}), {0, 1}).values,
            V({0, 0, 1, 0}));
}

TEST(MarginalTest, TwoWayIsRowMajorOverUnequalDomains) {
  std::vector<data::AttributeSpec> attrs = {testing::Categorical("x", 2),
                                            testing::Categorical("y", 3)};
  const data::Schema schema(attrs);
  const auto m = TwoWay(DiscreteDataset::FromRows(schema, {{1, 2}}), {0, 1});
  EXPECT_EQ(m.values, V({0, 0, 0, 0, 0, 1}));
}

// The two-way marginal always sums to the one-way marginals.
TEST(MarginalTest, TwoWayMarginalizesToOneWay) {
  Rng rng(1);
  const auto schema = UniformSchema(3, 4);
  std::vector<std::vector<data::Code>> rows;
  for (int i = 0; i < 300; ++i) {
    rows.push_back({static_cast<data::Code>(rng.UniformInt(4)),
                    static_cast<data::Code>(rng.UniformInt(4)),
                    static_cast<data::Code>(rng.UniformInt(4))});
  }
  const auto ds = DiscreteDataset::FromRows(schema, rows);
  for (const auto& pair : AllPairs(3)) {
    const auto ab = TwoWay(ds, pair).values;
    const auto a = OneWay(ds, pair.a).values;
    const auto b = OneWay(ds, pair.b).values;
    for (int i = 0; i < 4; ++i) {
      double row = 0.0, col = 0.0;
      for (int j = 0; j < 4; ++j) {
        row += ab[i * 4 + j];
        col += ab[j * 4 + i];
      }
      EXPECT_NEAR(row, a[i], 1e-12);
      EXPECT_NEAR(col, b[i], 1e-12);
    }
  }
}

TEST(MarginalTest, OuterProduct) {
  const auto schema = UniformSchema(2, 2);
  Marginal a{{0}, {0.5, 0.5}}, b{{1}, {0.5, 0.5}};
  EXPECT_EQ(OuterProduct(a, b, schema).values, V({0.25, 0.25, 0.25, 0.25}));
  Marginal c{{0}, {1, 0}}, e{{1}, {0.3, 0.7}};
  EXPECT_EQ(OuterProduct(c, e, schema).values, V({0.3, 0.7, 0, 0}));
  Marginal point{{1}, {0, 1}};
  Marginal e_a{{0}, {0.3, 0.7}};
  EXPECT_EQ(OuterProduct(e_a, point, schema).values, V({0, 0.3, 0, 0.7}));
  Marginal bad{{1}, {1, 0, 0}};
  EXPECT_THROW(OuterProduct(a, bad, schema), std::invalid_argument);
}

TEST(MarginalTest, InDif2) {
  const auto schema = UniformSchema(2, 2);
  Marginal half{{0}, {0.5, 0.5}}, half_b{{1}, {0.5, 0.5}};
  EXPECT_DOUBLE_EQ(InDif2Exact({{0, 1}, {0.25, 0.25, 0.25, 0.25}}, half, half_b, schema),
                   0.0);
  EXPECT_DOUBLE_EQ(InDif2Exact({{0, 1}, {0.5, 0, 0, 0.5}}, half, half_b, schema), 0.5);
}

TEST(MarginalTest, RepairClipsAndRenormalizes) {
  const auto r = ProjectToSimplexByClipping(V({0.51, -0.01, 0.5}));
  double s = 0.0;
  for (double x : r) {
    EXPECT_GE(x, 0.0);
    s += x;
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(ProjectToSimplexByClipping(V({-1, -2})), V({0.5, 0.5}));
}

TEST(MarginalTest, PairKeysAndJson) {
  EXPECT_EQ(Pair({3, 11}).Key(), "3,11");
  EXPECT_EQ(Pair::FromKey("3,11"), Pair({3, 11}));
  EXPECT_THROW(Pair::FromKey("3;11"), std::invalid_argument);
  const Marginal m{{0, 2}, {0.1, 0.9}};
  const auto back = Marginal::FromJson(m.ToJson());
  EXPECT_EQ(back.attrs, m.attrs);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(AllPairs(4).size(), 6u);
  EXPECT_EQ(AllPairs(4).front(), Pair({0, 1}));
  EXPECT_EQ(AllPairs(4).back(), Pair({2, 3}));
}

TEST(ProjectionTest, DeterministicPerPairAndSeed) {
  const auto p = ProjectionMatrix::Generate({0, 1}, 400, 10, 99);
  EXPECT_EQ(p, ProjectionMatrix::Generate({0, 1}, 400, 10, 99));
  EXPECT_FALSE(p == ProjectionMatrix::Generate({0, 2}, 400, 10, 99));
}

TEST(ProjectionTest, EntryVarianceIsOneOverK) {
  const auto p = ProjectionMatrix::Generate({0, 1}, 400, 10, 5);
  double s = 0.0, ss = 0.0;
  for (int r = 0; r < 400; ++r) {
    for (int c = 0; c < 10; ++c) {
      s += p.at(r, c);
      ss += p.at(r, c) * p.at(r, c);
    }
  }
  const double n = 4000.0;
  const double var = ss / n - (s / n) * (s / n);
  EXPECT_NEAR(var, 0.1, 0.02);
}

TEST(ProjectionTest, ProjectIsLinear) {
  const auto p = ProjectionMatrix::Generate({0, 1}, 4, 3, 1);
  const auto e2 = p.Project(V({0, 0, 1, 0}));
  for (int c = 0; c < 3; ++c) EXPECT_EQ(e2[c], p.at(2, c));
  for (double x : p.Project(V({0, 0, 0, 0}))) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(p.Project(V({1, 0})), std::invalid_argument);
}

// E||mP||^2 = ||m||^2 over fresh projections.
TEST(ProjectionTest, PreservesSquaredNormInExpectation) {
  const std::vector<double> m = {0.3, 0.0, 0.4, 0.0};  // ||m|| = 0.5
  const int trials = 10000;
  double s = 0.0, ss = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto p = ProjectionMatrix::Generate({0, 1}, 4, 10, static_cast<uint64_t>(t));
    const auto y = p.Project(m);
    double sq = 0.0;
    for (double v : y) sq += v * v;
    s += sq;
    ss += sq * sq;
  }
  const double mean = s / trials;
  const double se = std::sqrt((ss / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, 0.25, 3 * se);
}

TEST(ProjectionTest, IdentityAndSets) {
  const auto id = ProjectionMatrix::Identity({0, 1}, 4);
  EXPECT_EQ(id.Project(V({0.1, 0.2, 0.3, 0.4})), V({0.1, 0.2, 0.3, 0.4}));
  EXPECT_DOUBLE_EQ(id.MaxRowNorm(), 1.0);
  const ProjectionSet set(UniformSchema(3, 2), 3, 7);
  EXPECT_EQ(set.size(), 3u);
  EXPECT_EQ(set.at({1, 2}), ProjectionMatrix::Generate({1, 2}, 4, 3, 7));
}

}  // namespace
}  // namespace fedsyn::marginals
