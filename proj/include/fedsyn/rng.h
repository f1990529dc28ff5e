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

#ifndef FEDSYN_RNG_H_
#define FEDSYN_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace fedsyn {

// splitmix64 finalizer. Stable across platforms and releases; every derived
// seed in the project goes through this function.
uint64_t Mix64(uint64_t x);

// Folds a list of tags into a master seed: master ^ Mix64(tag_0, tag_1, ...).
uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> tags);

// Seeded random stream with a fully specified output sequence.
//
// The engine is std::mt19937_64, whose output is fixed by the standard. The
// distributions are written out here instead of using <random>'s, which are
// implementation-defined:
//   Uniform()    53-bit mantissa fill, [0, 1)
//   UniformInt() rejection sampling on the top bits, [0, bound)
//   Normal()     Box-Muller, both variates used (cosine first, then sine)
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  double Uniform();
  // (0, 1], safe to pass to log().
  double UniformPositive();
  uint64_t UniformInt(uint64_t bound);
  double Normal();
  double Exponential();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates, iterating from the back.
template <typename T>
void Shuffle(std::span<T> items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformInt(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace fedsyn

#endif  // FEDSYN_RNG_H_
