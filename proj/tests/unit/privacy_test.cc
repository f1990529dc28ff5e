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
#include "fedsyn/privacy/budget.h"
#include "fedsyn/privacy/noise.h"
#include "fedsyn/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fedsyn::privacy {
namespace {

using marginals::Pair;

TEST(BudgetTest, EpsDeltaToRhoRoundTrips) {
  EXPECT_NEAR(EpsDeltaToRho(1.0, 1e-5), 0.02082, 1e-5);
  for (double eps : {0.2, 1.0, 5.0}) {
    for (double delta : {1e-5, 1e-6}) {
      EXPECT_NEAR(RhoToEps(EpsDeltaToRho(eps, delta), delta), eps, 1e-9);
    }
  }
}

TEST(BudgetTest, DegenerateDeltaGivesRhoEqualEps) {
  EXPECT_NEAR(EpsDeltaToRho(0.7, 1.0 - 1e-15), 0.7, 1e-6);
}

TEST(BudgetTest, RejectsBadArguments) {
  EXPECT_THROW(EpsDeltaToRho(0.0, 1e-5), std::invalid_argument);
  EXPECT_THROW(EpsDeltaToRho(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(EpsDeltaToRho(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(BudgetPlan::Allocate(1.0, 1.0 / 3.0, 4), std::invalid_argument);
  EXPECT_THROW(BudgetPlan::Allocate(1.0, 0.0, 4), std::invalid_argument);
  EXPECT_THROW(BudgetPlan::Allocate(1.0, 0.1, 1), std::invalid_argument);
}

TEST(BudgetTest, AllocateSplits) {
  const auto plan = BudgetPlan::Allocate(1.0, 0.1, 15);
  EXPECT_NEAR(plan.rho_1, 0.1, 1e-15);
  EXPECT_NEAR(plan.rho_2, 0.1, 1e-15);
  EXPECT_NEAR(plan.rho_3, 0.8, 1e-15);
  EXPECT_EQ(plan.assumed_selected_count, 35);
  EXPECT_NEAR(plan.per_marginal_rho, 0.8 / 35, 1e-15);
  EXPECT_NEAR(plan.rho_1 + plan.rho_2 + plan.rho_3, plan.rho_total, 1e-15);
}

TEST(AccountantTest, RejectsOverspendWithoutRecording) {
  Accountant acc(BudgetPlan::Allocate(1.0, 0.1, 3));
  acc.Spend("a", 0.6, 1.0);
  EXPECT_THROW(acc.Spend("b", 0.5, 1.0), BudgetExceededError);
  EXPECT_FALSE(acc.TrySpend("b", 0.5, 1.0));
  EXPECT_EQ(acc.entries().size(), 1u);
  EXPECT_TRUE(acc.TrySpend("c", 0.4, 1.0));
  EXPECT_NEAR(acc.remaining(), 0.0, 1e-12);
  EXPECT_THROW(acc.Spend("d", -0.1, 1.0), std::invalid_argument);
  const auto doc = acc.ToJson();
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[1]["phase"], "c");
}

TEST(NoiseTest, SigmaFormulas) {
  EXPECT_DOUBLE_EQ(SigmaOneWay(1.0, 8, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(SigmaOneWay(1.0, 2, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(SigmaOneWay(1.0, 8, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(SigmaTwoWay(1.0, 3, 1.5), 1.0);
  EXPECT_DOUBLE_EQ(SigmaTwoWay(1.0, 2, 1.0), std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(SigmaTwoWay(2.0, 3, 1.5), 2.0);
  EXPECT_DOUBLE_EQ(SigmaSelected(1.0, 0.5), 1.0);
}

TEST(NoiseTest, Delta2Bound) {
  EXPECT_DOUBLE_EQ(Delta2Bound(marginals::ProjectionMatrix::Identity({0, 1}, 2)), 1.0);
  const marginals::ProjectionMatrix p({0, 1}, 2, 2, {0.6, 0.8, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(Delta2Bound(p), 1.0);
  EXPECT_DOUBLE_EQ(Delta1Bound(), 1.0);
}

TEST(NoiseTest, GaussianNoise) {
  Rng rng(1);
  for (double x : GaussianNoise(10, 0.0, rng)) EXPECT_EQ(x, 0.0);
  const auto v = GaussianNoise(100000, 1.0, rng);
  double s = 0.0, ss = 0.0;
  for (double x : v) {
    s += x;
    ss += x * x;
  }
  const double mean = s / v.size();
  EXPECT_NEAR(ss / v.size() - mean * mean, 1.0, 0.02);
  Rng a(9), b(9);
  EXPECT_EQ(GaussianNoise(5, 2.0, a), GaussianNoise(5, 2.0, b));
}

TEST(NoiseTest, Alpha) {
  const std::vector<int64_t> five = {7, 7, 7, 7, 7};
  EXPECT_DOUBLE_EQ(ComputeAlpha(five), 0.2);
  const std::vector<int64_t> two = {1000, 1000};
  EXPECT_DOUBLE_EQ(ComputeAlpha(two), 0.5);
  const std::vector<int64_t> skew = {1, 3};
  EXPECT_DOUBLE_EQ(ComputeAlpha(skew), 0.625);
}

TEST(NoiseTest, CalibrationModes) {
  const auto plan = BudgetPlan::Allocate(1.0, 0.1, 4);
  const auto local = NoiseCalibration::FromPlan(plan, 4, SensitivityMode::kLocal);
  const auto unit = NoiseCalibration::FromPlan(plan, 4, SensitivityMode::kUnit);
  EXPECT_DOUBLE_EQ(local.multiplier_1, std::sqrt(4 / (2 * 0.1)));
  EXPECT_DOUBLE_EQ(local.multiplier_2, std::sqrt(12 / (4 * 0.1)));
  EXPECT_DOUBLE_EQ(local.multiplier_3, 1.0 / std::sqrt(2 * plan.per_marginal_rho));
  EXPECT_DOUBLE_EQ(local.Sensitivity(50), std::sqrt(2.0) / 50);
  EXPECT_DOUBLE_EQ(unit.Sensitivity(50), 1.0);
  const auto p = marginals::ProjectionMatrix::Generate({0, 1}, 16, 4, 3);
  EXPECT_DOUBLE_EQ(local.ProjectedSensitivity(50, p), 2 * p.MaxRowNorm() / 51);
  EXPECT_DOUBLE_EQ(unit.ProjectedSensitivity(50, p), p.MaxRowNorm());
  EXPECT_EQ(ParseSensitivityMode(SensitivityModeName(SensitivityMode::kUnit)),
            SensitivityMode::kUnit);
  const auto quiet = NoiseCalibration::Noiseless(4);
  EXPECT_EQ(quiet.multiplier_1 + quiet.multiplier_2 + quiet.multiplier_3, 0.0);
}

// Largest change of the one-way marginal, the raw two-way marginal and its
// projection over every dataset obtained by adding one row.
struct NeighborMax {
  double one_way = 0.0;
  double two_way = 0.0;
  double projected = 0.0;
};

NeighborMax EnumerateNeighbors(const data::DiscreteDataset& ds,
                               const marginals::ProjectionMatrix& p) {
  const int s = ds.schema().domain_size(0);
  const Pair pair{0, 1};
  const auto m_a = marginals::OneWay(ds, 0).values;
  const auto m_ab = marginals::TwoWay(ds, pair).values;
  const auto mp = p.Project(m_ab);
  NeighborMax out;
  for (int x = 0; x < s; ++x) {
    for (int y = 0; y < s; ++y) {
      std::vector<std::vector<data::Code>> rows;
      for (size_t r = 0; r < ds.num_rows(); ++r) rows.push_back(ds.Row(r));
      rows.push_back({x, y});
      const auto nb = data::DiscreteDataset::FromRows(ds.schema(), rows);
      const auto nb_ab = marginals::TwoWay(nb, pair).values;
      out.one_way = std::max(
          out.one_way, std::sqrt(marginals::SquaredL2Distance(
                           marginals::OneWay(nb, 0).values, m_a)));
      out.two_way = std::max(out.two_way,
                             std::sqrt(marginals::SquaredL2Distance(nb_ab, m_ab)));
      out.projected = std::max(
          out.projected, std::sqrt(marginals::SquaredL2Distance(p.Project(nb_ab), mp)));
    }
  }
  return out;
}

data::DiscreteDataset RandomLocal(int n, int s, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<data::Code>> rows;
  for (int i = 0; i < n; ++i) {
    rows.push_back({static_cast<data::Code>(rng.UniformInt(s)),
                    static_cast<data::Code>(rng.UniformInt(s))});
  }
  return data::DiscreteDataset::FromRows(testing::UniformSchema(2, s), rows);
}

TEST(SensitivityTest, ExhaustiveNeighborsRespectBounds) {
  for (int n : {2, 10, 20, 50}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const auto ds = RandomLocal(n, 4, seed);
      const auto p = marginals::ProjectionMatrix::Generate({0, 1}, 16, 10, seed + 100);
      const auto got = EnumerateNeighbors(ds, p);
      EXPECT_LE(got.one_way, LocalSensitivity(n) + 1e-12);
      EXPECT_LE(got.two_way, LocalSensitivity(n) + 1e-12);
      EXPECT_LE(got.projected, Delta2Bound(p) + 1e-12);
      EXPECT_LE(got.projected, LocalProjectedSensitivity(n, p) + 1e-12);
      EXPECT_LE(got.one_way, Delta1Bound());
    }
  }
}

// A point-mass dataset plus a row in a different cell attains sqrt(2)/(n+1)
// on the one-way marginal, so the local bound is within a factor (n+1)/n.
TEST(SensitivityTest, LocalBoundIsNearlyTight) {
  const auto ds = data::DiscreteDataset::FromRows(testing::UniformSchema(2, 4),
                                                  std::vector<std::vector<data::Code>>(
                                                      10, std::vector<data::Code>{0, 0}));
  const auto got =
      EnumerateNeighbors(ds, marginals::ProjectionMatrix::Identity({0, 1}, 16));
  EXPECT_NEAR(got.one_way, std::sqrt(2.0) * 10 / 11 / 10, 1e-12);
  EXPECT_GE(got.one_way, LocalSensitivity(10) * 10 / 11 - 1e-12);
}

}  // namespace
}  // namespace fedsyn::privacy
