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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "factlink/preranker.h"
#include "factlink/random.h"

namespace factlink {
namespace {

Embedding RandomUnit(Rng &rng, size_t dim) {
  std::vector<float> v(dim);
  for (float &x : v) x = static_cast<float>(rng.Normal());
  return Normalized(std::move(v));
}

EmbeddingIndex RandomIndex(size_t rows, size_t dim, Rng &rng) {
  std::vector<std::string> ids;
  std::vector<Embedding> embs;
  for (size_t i = 0; i < rows; ++i) {
    ids.push_back("Q" + std::to_string(i));
    embs.push_back(RandomUnit(rng, dim));
  }
  return EmbeddingIndex::Build(EntryKind::kEntity, ids, embs);
}

void BM_TopK(benchmark::State &state) {
  Rng rng(11);
  const size_t rows = static_cast<size_t>(state.range(0));
  const size_t k = static_cast<size_t>(state.range(1));
  const EmbeddingIndex index = RandomIndex(rows, 64, rng);
  const Embedding q = RandomUnit(rng, 64);
  for (auto _ : state) benchmark::DoNotOptimize(TopK(index, q, k));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_TopK)->ArgsProduct({{1000, 10000, 100000}, {1, 10, 50}});

}  // namespace
}  // namespace factlink
