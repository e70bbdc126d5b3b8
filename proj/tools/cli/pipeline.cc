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

#include "cli/pipeline.h"

#include <fstream>

#include "factlink/status.h"

namespace factlink::cli {

std::vector<Alignment> ByPartition(std::span<const Alignment> alignments,
                                   Partition partition) {
  std::vector<Alignment> out;
  for (const Alignment &a : alignments) {
    if (a.partition == partition) out.push_back(a);
  }
  return out;
}

Benchmark AssembleBenchmark(const KgStore &kg,
                            std::vector<Alignment> alignments,
                            const BenchmarkOptions &options) {
  Benchmark b;
  b.store = kg;
  b.alignments = std::move(alignments);
  b.train = ByPartition(b.alignments, Partition::kTrain);
  b.validation = ByPartition(b.alignments, Partition::kValidation);
  b.test = ByPartition(b.alignments, Partition::kTest);
  b.brkg = RestrictToBenchmark(b.store, b.alignments);
  for (SplitKind kind : kAllSplitKinds) {
    SplitSpec spec{kind, options.inductive_mode};
    b.splits.emplace(kind, MakeSplit(spec, b.test, b.train, b.brkg));
  }
  return b;
}

Benchmark BuildBenchmark(const KgStore &kg, std::span<const SentenceOie> oies,
                         std::span<const SentenceFactPair> pairs,
                         const BenchmarkOptions &options) {
  const KgStore filtered = FilterByFrequency(kg, options.min_frequency);
  std::vector<Alignment> aligned =
      Align(oies, pairs, filtered, AlignOptions{options.surface});
  if (options.augment_aliases) aligned = AugmentAliases(aligned, filtered);

  const std::vector<Alignment> test = ByPartition(aligned, Partition::kTest);
  const std::vector<Alignment> train = RemoveLeakage(
      ByPartition(aligned, Partition::kTrain), test, options.surface);
  std::vector<Alignment> all = train;
  for (const Alignment &a : aligned) {
    if (a.partition != Partition::kTrain) all.push_back(a);
  }
  return AssembleBenchmark(filtered, std::move(all), options);
}

std::string SplitFileName(SplitKind kind) {
  return "split_" + std::string(SplitKindName(kind)) + ".jsonl";
}

void WriteAlignments(std::span<const Alignment> alignments,
                     const std::filesystem::path &path,
                     const ArtifactHeader &header) {
  std::ofstream out = OpenForWrite(path);
  out << DumpRecord(HeaderRecord(header)) << '\n';
  for (const Alignment &a : alignments) {
    out << DumpRecord(AlignmentToJson(a)) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void WriteBenchmark(const Benchmark &benchmark,
                    const std::filesystem::path &dir,
                    const ArtifactHeader &header) {
  WriteAlignments(benchmark.alignments, dir / "alignments.jsonl", header);
  std::ofstream stats = OpenForWrite(dir / "stats.jsonl");
  stats << DumpRecord(HeaderRecord(header)) << '\n';
  for (SplitKind kind : kAllSplitKinds) {
    const SplitResult &split = benchmark.splits.at(kind);
    WriteAlignments(split.alignments, dir / SplitFileName(kind), header);
    stats << DumpRecord(StatsToJson(kind, split.stats)) << '\n';
  }
  if (!stats) throw Error(ErrorCode::kIo, "failed writing stats.jsonl");
}

const KgStore &StoreVariant(const Benchmark &benchmark, std::string_view name) {
  if (name == "BRKG" || name == "brkg") return benchmark.brkg;
  if (name == "Large" || name == "large") return benchmark.store;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown store variant '" + std::string(name) + "'");
}

std::vector<KgFact> PrerankPredictions(const EncoderContract &encoder,
                                       const KgIndices &indices,
                                       std::span<const Alignment> alignments,
                                       bool with_context) {
  std::vector<KgFact> out;
  out.reserve(alignments.size());
  for (const Alignment &a : alignments) {
    out.push_back(Link(encoder, indices, a.oie, 1, with_context).LinkedFact());
  }
  return out;
}

std::vector<KgFact> RerankPredictions(const EncoderContract &encoder,
                                      const KgIndices &indices,
                                      const CrossScorerParams &scorer,
                                      std::span<const Alignment> alignments,
                                      size_t k, bool with_context) {
  std::vector<KgFact> out;
  out.reserve(alignments.size());
  for (const Alignment &a : alignments) {
    const SlotEmbeddings slots = encoder.EmbedSlots(a.oie, with_context);
    const SlotLinkResult ranked = LinkEmbeddings(slots, indices, k);
    const std::vector<CandidateFact> candidates = EnumerateCandidates(ranked);
    out.push_back(Rerank(scorer, slots, candidates, indices).best.fact);
  }
  return out;
}

std::vector<KgFact> GoldFacts(std::span<const Alignment> alignments) {
  std::vector<KgFact> out;
  out.reserve(alignments.size());
  for (const Alignment &a : alignments) out.push_back(a.fact);
  return out;
}

}  // namespace factlink::cli
