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

// Library-level pipeline stages shared by the CLI, tests and benchmarks.

#ifndef FACTLINK_TOOLS_PIPELINE_H_
#define FACTLINK_TOOLS_PIPELINE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/encoder.h"
#include "factlink/jsonl.h"
#include "factlink/kg_store.h"
#include "factlink/preranker.h"
#include "factlink/reranker.h"
#include "factlink/splits.h"

namespace factlink::cli {

struct BenchmarkOptions {
  size_t min_frequency = 1;
  bool augment_aliases = true;
  SurfaceOptions surface;
  InductiveMode inductive_mode = InductiveMode::kAnyEntityUnseen;
};

struct Benchmark {
  KgStore store;  // full KG after frequency filtering ("Large")
  KgStore brkg;   // restricted to entries the alignments reference
  std::vector<Alignment> alignments;
  std::vector<Alignment> train;
  std::vector<Alignment> validation;
  std::vector<Alignment> test;
  std::map<SplitKind, SplitResult> splits;
};

inline constexpr SplitKind kAllSplitKinds[] = {
    SplitKind::kTransductive, SplitKind::kInductive, SplitKind::kPolysemous,
    SplitKind::kOutOfKg};

// filter -> align -> augment -> remove leakage -> splits.
Benchmark BuildBenchmark(const KgStore &kg, std::span<const SentenceOie> oies,
                         std::span<const SentenceFactPair> pairs,
                         const BenchmarkOptions &options = {});

// Rebuilds partitions, BRKG and splits from stored alignments.
Benchmark AssembleBenchmark(const KgStore &kg,
                            std::vector<Alignment> alignments,
                            const BenchmarkOptions &options = {});

std::string SplitFileName(SplitKind kind);

// alignments.jsonl, split_<kind>.jsonl (four files) and stats.jsonl.
void WriteBenchmark(const Benchmark &benchmark,
                    const std::filesystem::path &dir,
                    const ArtifactHeader &header);
void WriteAlignments(std::span<const Alignment> alignments,
                     const std::filesystem::path &path,
                     const ArtifactHeader &header);

std::vector<Alignment> ByPartition(std::span<const Alignment> alignments,
                                   Partition partition);

// "BRKG" or "Large"; throws InvalidArgument otherwise.
const KgStore &StoreVariant(const Benchmark &benchmark, std::string_view name);

// Top-1 per slot from the pre-ranker.
std::vector<KgFact> PrerankPredictions(const EncoderContract &encoder,
                                       const KgIndices &indices,
                                       std::span<const Alignment> alignments,
                                       bool with_context);

// Pre-rank to depth k per slot, then rerank the k^3 candidates.
std::vector<KgFact> RerankPredictions(const EncoderContract &encoder,
                                      const KgIndices &indices,
                                      const CrossScorerParams &scorer,
                                      std::span<const Alignment> alignments,
                                      size_t k, bool with_context);

std::vector<KgFact> GoldFacts(std::span<const Alignment> alignments);

}  // namespace factlink::cli

#endif  // FACTLINK_TOOLS_PIPELINE_H_
