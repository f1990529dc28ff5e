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

#include "fedsyn/data/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedsyn/rng.h"
#include "fmt/format.h"

namespace fedsyn::data {
namespace {

std::vector<size_t> EqualSizes(size_t n, int c) {
  std::vector<size_t> sizes(c, n / c);
  for (size_t i = 0; i < n % c; ++i) ++sizes[i];
  return sizes;
}

// Symmetric Dirichlet(1) proportions, largest-remainder rounding, then rows
// moved from the largest part until every part holds at least two.
std::vector<size_t> DirichletSizes(size_t n, int c, Rng& rng) {
  std::vector<double> weights(c);
  for (auto& w : weights) w = rng.Exponential();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<size_t> sizes(c);
  std::vector<std::pair<double, int>> remainders;
  size_t assigned = 0;
  for (int i = 0; i < c; ++i) {
    const double exact = weights[i] / total * static_cast<double>(n);
    sizes[i] = static_cast<size_t>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (size_t k = 0; assigned < n; ++k, ++assigned) {
    ++sizes[remainders[k % remainders.size()].second];
  }

  for (int i = 0; i < c; ++i) {
    while (sizes[i] < 2) {
      auto donor = std::max_element(sizes.begin(), sizes.end());
      --*donor;
      ++sizes[i];
    }
  }
  return sizes;
}

}  // namespace

PartitionStrategy PartitionStrategy::Parse(std::string_view text) {
  if (text == "uniform") return Uniform();
  if (text == "random_size") return RandomSize();
  if (text.starts_with("biased:")) {
    std::string_view rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) return Biased(std::string(rest));
    return Biased(std::string(rest.substr(0, colon)),
                  std::stod(std::string(rest.substr(colon + 1))));
  }
  throw std::invalid_argument("unknown partition strategy: " +
                              std::string(text));
}

std::string PartitionStrategy::ToString() const {
  switch (kind) {
    case Kind::kUniform:
      return "uniform";
    case Kind::kRandomSize:
      return "random_size";
    case Kind::kBiased:
      return "biased:" + attribute +
             (quantile_split ? fmt::format(":{}", *quantile_split) : "");
  }
  return "";
}

std::vector<LocalDataset> Partition(const DiscreteDataset& ds,
                                    const PartitionStrategy& strategy, int c,
                                    uint64_t seed) {
  const size_t n = ds.num_rows();
  if (c < 1) throw std::invalid_argument("participant count must be >= 1");
  if (n < 2 * static_cast<size_t>(c)) {
    throw std::invalid_argument(
        "participant count larger than n/2: every participant needs two rows");
  }
  size_t attr = 0;
  if (strategy.kind == PartitionStrategy::Kind::kBiased) {
    try {
      attr = ds.schema().IndexOf(strategy.attribute);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("biased partition: unknown attribute '" +
                                  strategy.attribute + "'");
    }
  }
  if (c == 1) return {LocalDataset{0, ds}};
  Rng rng(DeriveSeed(seed, {0x70617274ULL}));  // "part"

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<size_t> sizes;

  switch (strategy.kind) {
    case PartitionStrategy::Kind::kUniform:
      Shuffle<size_t>(order, rng);
      sizes = EqualSizes(n, c);
      break;
    case PartitionStrategy::Kind::kRandomSize:
      sizes = DirichletSizes(n, c, rng);
      Shuffle<size_t>(order, rng);
      break;
    case PartitionStrategy::Kind::kBiased: {
      const auto col = ds.column(attr);
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t x, size_t y) { return col[x] < col[y]; });
      if (strategy.quantile_split && c > 1) {
        const double split = *strategy.quantile_split;
        if (!(split > 0.0 && split < 1.0)) {
          throw std::invalid_argument("quantile_split must lie in (0, 1)");
        }
        size_t first = static_cast<size_t>(std::llround(split * n));
        const size_t rest_min = 2 * static_cast<size_t>(c - 1);
        first = std::clamp<size_t>(first, 2, n - rest_min);
        sizes = EqualSizes(n - first, c - 1);
        sizes.insert(sizes.begin(), first);
      } else {
        sizes = EqualSizes(n, c);
      }
      size_t offset = 0;
      for (size_t s : sizes) {
        Shuffle(std::span<size_t>(order).subspan(offset, s), rng);
        offset += s;
      }
      break;
    }
  }

  std::vector<LocalDataset> parts;
  parts.reserve(c);
  size_t offset = 0;
  for (int i = 0; i < c; ++i) {
    std::span<const size_t> rows(order.data() + offset, sizes[i]);
    parts.push_back({i, ds.Select(rows)});
    offset += sizes[i];
  }
  return parts;
}

}  // namespace fedsyn::data
