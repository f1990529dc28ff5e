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

#ifndef FEDSYN_MARGINALS_PROJECTION_H_
#define FEDSYN_MARGINALS_PROJECTION_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fedsyn/data/schema.h"
#include "fedsyn/marginals/marginal.h"

namespace fedsyn::marginals {

// Dense Gaussian sketch for one attribute pair: rows = s_a * s_b, cols = k,
// entries i.i.d. N(0, 1/k). Only (master seed, k) is ever shared; every party
// regenerates the same matrix from DeriveSeed(master_seed, {a, b}).
class ProjectionMatrix {
 public:
  static ProjectionMatrix Generate(Pair pair, int rows, int k,
                                   uint64_t master_seed);

  // Explicit entries (row-major), for tests that inject a known matrix.
  ProjectionMatrix(Pair pair, int rows, int k, std::vector<double> entries);
  static ProjectionMatrix Identity(Pair pair, int size);

  Pair pair() const { return pair_; }
  int rows() const { return rows_; }
  int k() const { return k_; }
  uint64_t seed() const { return seed_; }
  double at(int row, int col) const { return entries_[row * k_ + col]; }
  std::span<const double> row(int r) const {
    return std::span<const double>(entries_).subspan(r * k_, k_);
  }

  // m * P, length k. Throws on length mismatch.
  std::vector<double> Project(std::span<const double> m) const;

  // max_i ||P[i, :]||_2.
  double MaxRowNorm() const;

  bool operator==(const ProjectionMatrix&) const = default;

 private:
  ProjectionMatrix() = default;

  Pair pair_;
  int rows_ = 0;
  int k_ = 0;
  uint64_t seed_ = 0;
  std::vector<double> entries_;
};

// The synchronized matrices for every pair of a schema.
class ProjectionSet {
 public:
  ProjectionSet() = default;
  ProjectionSet(const data::Schema& schema, int k, uint64_t master_seed);

  const ProjectionMatrix& at(Pair pair) const { return matrices_.at(pair); }
  void Set(ProjectionMatrix matrix);
  size_t size() const { return matrices_.size(); }

  // Identity matrices (k = s_a * s_b) for every pair: projection disabled.
  static ProjectionSet Identity(const data::Schema& schema);

 private:
  std::map<Pair, ProjectionMatrix> matrices_;
};

}  // namespace fedsyn::marginals

#endif  // FEDSYN_MARGINALS_PROJECTION_H_
