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

#include "fedsyn/marginals/projection.h"

#include <cmath>
#include <stdexcept>

#include "fedsyn/rng.h"

namespace fedsyn::marginals {

ProjectionMatrix ProjectionMatrix::Generate(Pair pair, int rows, int k,
                                            uint64_t master_seed) {
  if (rows < 1 || k < 1) {
    throw std::invalid_argument("projection needs rows >= 1 and k >= 1");
  }
  ProjectionMatrix p;
  p.pair_ = pair;
  p.rows_ = rows;
  p.k_ = k;
  p.seed_ = DeriveSeed(master_seed, {static_cast<uint64_t>(pair.a),
                                     static_cast<uint64_t>(pair.b)});
  Rng rng(p.seed_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  p.entries_.resize(static_cast<size_t>(rows) * k);
  for (auto& e : p.entries_) e = scale * rng.Normal();
  return p;
}

ProjectionMatrix::ProjectionMatrix(Pair pair, int rows, int k,
                                   std::vector<double> entries)
    : pair_(pair), rows_(rows), k_(k), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<size_t>(rows) * k) {
    throw std::invalid_argument("projection entries do not match rows * k");
  }
}

ProjectionMatrix ProjectionMatrix::Identity(Pair pair, int size) {
  std::vector<double> entries(static_cast<size_t>(size) * size, 0.0);
  for (int i = 0; i < size; ++i) entries[static_cast<size_t>(i) * size + i] = 1.0;
  return ProjectionMatrix(pair, size, size, std::move(entries));
}

std::vector<double> ProjectionMatrix::Project(std::span<const double> m) const {
  if (m.size() != static_cast<size_t>(rows_)) {
    throw std::invalid_argument("marginal length " + std::to_string(m.size()) +
                                " does not match projection rows " +
                                std::to_string(rows_));
  }
  std::vector<double> out(k_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double w = m[i];
    if (w == 0.0) continue;
    const double* row = entries_.data() + static_cast<size_t>(i) * k_;
    for (int j = 0; j < k_; ++j) out[j] += w * row[j];
  }
  return out;
}

double ProjectionMatrix::MaxRowNorm() const {
  double best = 0.0;
  for (int i = 0; i < rows_; ++i) best = std::max(best, L2Norm(row(i)));
  return best;
}

ProjectionSet::ProjectionSet(const data::Schema& schema, int k,
                             uint64_t master_seed) {
  for (const Pair& p : AllPairs(static_cast<int>(schema.size()))) {
    const int rows = schema.domain_size(p.a) * schema.domain_size(p.b);
    matrices_.emplace(p, ProjectionMatrix::Generate(p, rows, k, master_seed));
  }
}

void ProjectionSet::Set(ProjectionMatrix matrix) {
  const Pair p = matrix.pair();
  matrices_.insert_or_assign(p, std::move(matrix));
}

ProjectionSet ProjectionSet::Identity(const data::Schema& schema) {
  ProjectionSet set;
  for (const Pair& p : AllPairs(static_cast<int>(schema.size()))) {
    set.Set(ProjectionMatrix::Identity(
        p, schema.domain_size(p.a) * schema.domain_size(p.b)));
  }
  return set;
}

}  // namespace fedsyn::marginals
