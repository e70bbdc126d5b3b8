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

// Sentence/fact datasets, OIE extractions and the distant-supervision
// alignment between them.

#ifndef FACTLINK_CORPUS_H_
#define FACTLINK_CORPUS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factlink/jsonl.h"
#include "factlink/kg_store.h"

namespace factlink {

enum class Slot { kSubject = 0, kRelation = 1, kObject = 2 };
inline constexpr Slot kAllSlots[] = {Slot::kSubject, Slot::kRelation,
                                     Slot::kObject};
std::string_view SlotName(Slot slot);
inline EntryKind SlotKind(Slot slot) {
  return slot == Slot::kRelation ? EntryKind::kPredicate : EntryKind::kEntity;
}
const std::string &FactSlot(const KgFact &fact, Slot slot);
std::string &FactSlot(KgFact &fact, Slot slot);

struct OieTriple {
  std::string subject;
  std::string relation;
  std::string object;
  std::optional<std::string> sentence;
  std::optional<std::string> extractor;

  const std::string &slot(Slot s) const;
};

// Throws MalformedRecord if a slot is blank or contains a reserved marker.
void ValidateOie(const OieTriple &triple);

// "<SUBJ> s <REL> r <OBJ> o", plus " <SENT> sentence" with context.
// Throws MissingContext when context is requested but absent.
std::string OieText(const OieTriple &triple, bool with_context);

// Stable 16-hex-digit key of a triple (over its context-free text). Used as
// the alignment id in artifacts and embedding import files.
std::string OieKey(const OieTriple &triple);

enum class Partition { kTrain, kValidation, kTest };
std::string_view PartitionName(Partition partition);
Partition ParsePartition(std::string_view name);

struct SentenceOie {
  std::string sentence_id;
  OieTriple triple;
};

struct SentenceFactPair {
  std::string sentence_id;
  std::string sentence;
  KgFact fact;
  std::optional<std::string> subject_mention;
  std::optional<std::string> object_mention;
  Partition partition = Partition::kTrain;
};

struct Alignment {
  std::string sentence_id;
  OieTriple oie;
  KgFact fact;
  bool augmented = false;
  Partition partition = Partition::kTrain;
};

struct AlignOptions {
  SurfaceOptions surface;
};

// Emits t<->f whenever the OIE subject and object equal the match targets of
// the fact (gold mention if given, else the canonical label). Exact duplicate
// OIEs within a sentence are collapsed first. Output is sorted by
// (sentence id, fact, subject, relation, object).
std::vector<Alignment> Align(std::span<const SentenceOie> oies,
                             std::span<const SentenceFactPair> pairs,
                             const KgStore &store,
                             const AlignOptions &options = {});

// Adds one augmented alignment per (subject surface, object surface) alias
// combination other than the original pair. Originals are kept, each
// followed by its augmentations.
std::vector<Alignment> AugmentAliases(std::span<const Alignment> alignments,
                                      const KgStore &store);

// Train alignments whose (normalized OIE, fact) pair does not occur in test.
std::vector<Alignment> RemoveLeakage(std::span<const Alignment> train,
                                     std::span<const Alignment> test,
                                     const SurfaceOptions &options = {});

// Benchmark-restricted KG: the entries referenced by the alignments' facts.
KgStore RestrictToBenchmark(const KgStore &store,
                            std::span<const Alignment> alignments);

// Record streams.
std::vector<SentenceOie> LoadOies(std::istream &in);
std::vector<SentenceFactPair> LoadPairs(std::istream &in);
std::vector<Alignment> LoadAlignments(std::istream &in);
std::vector<Alignment> LoadAlignmentsFile(const std::filesystem::path &path);
Json AlignmentToJson(const Alignment &alignment);
Json OieToJson(const SentenceOie &oie);
Json PairToJson(const SentenceFactPair &pair);

}  // namespace factlink

#endif  // FACTLINK_CORPUS_H_
