// Copyright 2026 The Factlink Authors.
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

#ifndef FACTLINK_RANDOM_H_
#define FACTLINK_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace factlink {

// 64-bit FNV-1a. Used wherever a hash has to be stable across platforms
// (feature buckets, config hashes, stream seeds).
uint64_t Fnv1a64(std::string_view data);

// Derives the seed of a named random stream from the master seed, so that
// enabling or disabling one pipeline stage does not shift the draws of
// another.
uint64_t StreamSeed(uint64_t master_seed, std::string_view stream_name);

// Thin wrapper over mt19937_64. The engine's output sequence is fixed by the
// standard; the distributions below are written out by hand because the
// standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Uniform(uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double UniformReal();

  // Uniform double in [lo, hi).
  double UniformReal(double lo, double hi) {
    return lo + (hi - lo) * UniformReal();
  }

  bool Bernoulli(double p) { return UniformReal() < p; }

  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = Uniform(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace factlink

#endif  // FACTLINK_RANDOM_H_
