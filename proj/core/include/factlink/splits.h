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

// Evaluation facets over aligned test data.

#ifndef FACTLINK_SPLITS_H_
#define FACTLINK_SPLITS_H_

#include <span>
#include <string_view>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/kg_store.h"

namespace factlink {

enum class SplitKind { kTransductive, kInductive, kPolysemous, kOutOfKg };
enum class InductiveMode { kAnyEntityUnseen, kAllEntitiesUnseen };

std::string_view SplitKindName(SplitKind kind);
SplitKind ParseSplitKind(std::string_view name);
InductiveMode ParseInductiveMode(std::string_view name);

struct SplitSpec {
  SplitKind kind = SplitKind::kTransductive;
  // Only meaningful for kInductive.
  InductiveMode inductive_mode = InductiveMode::kAnyEntityUnseen;
};

struct SplitStats {
  size_t samples = 0;
  size_t unique_entities = 0;
  size_t unique_predicates = 0;
  size_t unique_facts = 0;

  bool operator==(const SplitStats &) const = default;
};

struct SplitResult {
  SplitKind kind = SplitKind::kTransductive;
  std::vector<Alignment> alignments;
  SplitStats stats;
};

SplitStats ComputeStats(std::span<const Alignment> alignments);

// Test alignments whose subject, predicate and object each occur in some
// training fact, while the whole triple does not.
SplitResult TransductiveSplit(std::span<const Alignment> test,
                              std::span<const Alignment> train);

// Test alignments with an entity outside every training fact (any or all of
// subject/object, per mode).
SplitResult InductiveSplit(std::span<const Alignment> test,
                           std::span<const Alignment> train,
                           InductiveMode mode = InductiveMode::kAnyEntityUnseen);

// Test alignments whose subject or object surface resolves to two or more
// entities of `store`.
SplitResult PolysemousSplit(std::span<const Alignment> test,
                            const KgStore &store);

// Test alignments whose subject, object and predicate are all absent from
// the training facts.
SplitResult OutOfKgSplit(std::span<const Alignment> test,
                         std::span<const Alignment> train);

// Dispatches on spec.kind. `store` is only used for kPolysemous.
SplitResult MakeSplit(const SplitSpec &spec, std::span<const Alignment> test,
                      std::span<const Alignment> train, const KgStore &store);

// Stats sidecar record, keyed by the benchmark table's column names.
Json StatsToJson(SplitKind kind, const SplitStats &stats);

}  // namespace factlink

#endif  // FACTLINK_SPLITS_H_
