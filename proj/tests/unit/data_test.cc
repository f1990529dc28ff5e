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

#include <map>
#include <set>
#include <sstream>

#include "fedsyn/data/dataset.h"
#include "fedsyn/data/partition.h"
#include "fedsyn/data/schema.h"
#include "fedsyn/data/table.h"
#include "fedsyn/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fedsyn::data {
namespace {

using testing::UniformSchema;

TEST(RngTest, DeriveSeedSeparatesTags) {
  EXPECT_EQ(DeriveSeed(7, {1, 2}), DeriveSeed(7, {1, 2}));
  EXPECT_NE(DeriveSeed(7, {1, 2}), DeriveSeed(7, {2, 1}));
  EXPECT_NE(DeriveSeed(7, {1}), DeriveSeed(8, {1}));
}

TEST(RngTest, StreamsAreReproducible) {
  Rng x(42), y(42);
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(x.Normal(), y.Normal());
    ASSERT_EQ(x.UniformInt(17), y.UniformInt(17));
  }
}

TEST(RngTest, UniformIntStaysInRangeAndCoversIt) {
  Rng rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.UniformInt(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(RngTest, NormalMoments) {
  Rng rng(11);
  const int n = 200000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    s += z;
    ss += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(CsvTest, InfersKinds) {
  std::istringstream in("age,sex\n30,M\n41,F\n25,M\n");
  const auto raw = ParseCsv(in);
  ASSERT_EQ(raw.num_rows(), 3u);
  EXPECT_EQ(raw.kinds[0], AttributeKind::kNumerical);
  EXPECT_EQ(raw.kinds[1], AttributeKind::kCategorical);
}

TEST(CsvTest, MixedColumnIsCategorical) {
  std::istringstream in("x\n12\nabc\n");
  EXPECT_EQ(ParseCsv(in).kinds[0], AttributeKind::kCategorical);
}

TEST(CsvTest, HintOverridesInference) {
  std::istringstream in("zip\n10001\n94110\n");
  const auto raw = ParseCsv(in, {{"zip", AttributeKind::kCategorical}});
  EXPECT_EQ(raw.kinds[0], AttributeKind::kCategorical);
}

TEST(CsvTest, QuotingAndErrors) {
  std::istringstream in("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n");
  const auto raw = ParseCsv(in);
  EXPECT_EQ(raw.columns[0][0], "x, y");
  EXPECT_EQ(raw.columns[1][0], "say \"hi\"");
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(ParseCsv(ragged), std::runtime_error);
  std::istringstream empty_field("a,b\n1,\n");
  EXPECT_THROW(ParseCsv(empty_field), std::runtime_error);
}

TEST(CsvTest, AdultShape) {
  const auto raw = LoadCsv(testing::AdultPath());
  EXPECT_EQ(raw.num_rows(), 32561u);  // 32,562 lines including the header.
  EXPECT_EQ(raw.names.size(), 15u);
}

TEST(DiscretizeTest, EdgeAssignment) {
  std::istringstream in("v\n0.0\n0.5\n1.0\n");
  const auto ds = Discretize(ParseCsv(in), 2);
  EXPECT_EQ(std::vector<Code>(ds.column(0).begin(), ds.column(0).end()),
            (std::vector<Code>{0, 1, 1}));
}

TEST(DiscretizeTest, FirstAppearanceCoding) {
  std::istringstream in("c\nb\na\nb\n");
  const auto ds = Discretize(ParseCsv(in));
  EXPECT_EQ(ds.schema().domain_size(0), 2);
  EXPECT_EQ(std::vector<Code>(ds.column(0).begin(), ds.column(0).end()),
            (std::vector<Code>{0, 1, 0}));
  EXPECT_EQ(ds.schema().attribute(0).Decode(1), "a");
}

TEST(DiscretizeTest, UniformRealsFillBinsEvenly) {
  Rng rng(5);
  std::ostringstream csv;
  csv << "u\n";
  for (int i = 0; i < 10000; ++i) csv << rng.Uniform() << "\n";
  std::istringstream in(csv.str());
  const auto ds = Discretize(ParseCsv(in), 100);
  std::vector<int> counts(100, 0);
  for (Code c : ds.column(0)) ++counts[c];
  for (int c : counts) EXPECT_NEAR(c / 10000.0, 0.01, 0.01);
}

TEST(DiscretizeTest, EncodeRoundTripsDecodedCsv) {
  std::istringstream in("x,c\n1.0,a\n2.0,b\n3.0,a\n9.0,c\n");
  const auto ds = Discretize(ParseCsv(in), 4);
  std::ostringstream out;
  WriteDecodedCsv(ds, out);
  std::istringstream back(out.str());
  EXPECT_EQ(Encode(ParseCsv(back), ds.schema()), ds);
}

TEST(DiscretizeTest, EncodeRejectsUnknownLabel) {
  std::istringstream in("c\na\nb\n");
  const auto ds = Discretize(ParseCsv(in));
  std::istringstream other("c\nz\n");
  EXPECT_THROW(Encode(ParseCsv(other), ds.schema()), std::invalid_argument);
}

TEST(SchemaTest, JsonRoundTrip) {
  std::vector<AttributeSpec> attrs = {testing::Numerical("n", 3),
                                      testing::Categorical("c", 2)};
  const Schema schema(attrs);
  EXPECT_EQ(Schema::FromJson(schema.ToJson()), schema);
  EXPECT_EQ(schema.IndexOf("c"), 1u);
  EXPECT_THROW(schema.IndexOf("zz"), std::out_of_range);
}

TEST(SchemaTest, RejectsBadSpecs) {
  auto spec = testing::Numerical("n", 3);
  spec.bin_edges = {0.0, 2.0, 1.0, 3.0};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  auto cat = testing::Categorical("c", 2);
  cat.category_labels.pop_back();
  EXPECT_THROW(cat.Validate(), std::invalid_argument);
}

TEST(DatasetTest, ValidatesCodes) {
  EXPECT_THROW(DiscreteDataset::FromRows(UniformSchema(2, 2), {{0, 2}}),
               std::invalid_argument);
  const auto ds = DiscreteDataset::FromRows(UniformSchema(2, 3), {{0, 2}, {1, 1}});
  EXPECT_EQ(ds.Row(0), (std::vector<Code>{0, 2}));
  EXPECT_EQ(ds.at(1, 1), 1);
}

DiscreteDataset Sequential(size_t n) {
  std::vector<std::vector<Code>> rows;
  for (size_t i = 0; i < n; ++i) rows.push_back({static_cast<Code>(i % 10), static_cast<Code>(i / 10 % 10)});
  return DiscreteDataset::FromRows(UniformSchema(2, 10), rows);
}

TEST(PartitionTest, UniformGivesEqualBlocks) {
  const auto ds = Sequential(1000);
  const auto parts = Partition(ds, PartitionStrategy::Uniform(), 5, 1);
  ASSERT_EQ(parts.size(), 5u);
  for (const auto& p : parts) EXPECT_EQ(p.data.num_rows(), 200u);
}

TEST(PartitionTest, SingleParticipantIsIdentity) {
  const auto ds = Sequential(50);
  const auto parts = Partition(ds, PartitionStrategy::Uniform(), 1, 1);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].data, ds);
}

TEST(PartitionTest, RandomSizesAreDeterministicAndValid) {
  const auto ds = Sequential(100);
  const auto first = Partition(ds, PartitionStrategy::RandomSize(), 3, 9);
  const auto second = Partition(ds, PartitionStrategy::RandomSize(), 3, 9);
  size_t total = 0;
  for (size_t i = 0; i < first.size(); ++i) {
    EXPECT_GE(first[i].data.num_rows(), 2u);
    EXPECT_EQ(first[i].data, second[i].data);
    total += first[i].data.num_rows();
  }
  EXPECT_EQ(total, 100u);
}

// Every strategy is a disjoint cover: the union of the parts is the input.
TEST(PartitionTest, PartsFormTheInputMultiset) {
  const auto ds = Sequential(333);
  for (const auto& strategy :
       {PartitionStrategy::Uniform(), PartitionStrategy::RandomSize(),
        PartitionStrategy::Biased("a0"), PartitionStrategy::Biased("a1", 0.6)}) {
    for (uint64_t seed : {1u, 2u, 3u}) {
      std::vector<std::vector<Code>> rows;
      for (const auto& p : Partition(ds, strategy, 4, seed)) {
        for (size_t r = 0; r < p.data.num_rows(); ++r) rows.push_back(p.data.Row(r));
      }
      const auto pooled = DiscreteDataset::FromRows(ds.schema(), rows);
      EXPECT_EQ(SortedRows(pooled), SortedRows(ds)) << strategy.ToString();
    }
  }
}

TEST(PartitionTest, BiasedBlocksAreSortedByAttribute) {
  const auto ds = Sequential(100);
  const auto parts = Partition(ds, PartitionStrategy::Biased("a0"), 2, 4);
  Code max_first = 0, min_second = 10;
  for (Code c : parts[0].data.column(0)) max_first = std::max(max_first, c);
  for (Code c : parts[1].data.column(0)) min_second = std::min(min_second, c);
  EXPECT_LE(max_first, min_second);
}

TEST(PartitionTest, RejectsBadArguments) {
  const auto ds = Sequential(10);
  EXPECT_THROW(Partition(ds, PartitionStrategy::Uniform(), 6, 0), std::invalid_argument);
  EXPECT_THROW(Partition(ds, PartitionStrategy::Biased("nope"), 2, 0),
               std::invalid_argument);
  EXPECT_THROW(PartitionStrategy::Parse("sideways"), std::invalid_argument);
  EXPECT_EQ(PartitionStrategy::Parse("biased:a0:0.3").ToString(), "biased:a0:0.3");
}

}  // namespace
}  // namespace fedsyn::data
