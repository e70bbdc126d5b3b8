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

// The reference knowledge graph: canonical entries (entities and predicates)
// with labels, descriptions and aliases, plus the facts over them.

#ifndef FACTLINK_KG_STORE_H_
#define FACTLINK_KG_STORE_H_

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factlink/jsonl.h"
#include "factlink/text.h"

namespace factlink {

enum class EntryKind { kEntity, kPredicate };

std::string_view EntryKindName(EntryKind kind);

struct KgEntry {
  std::string id;
  EntryKind kind = EntryKind::kEntity;
  std::string label;
  std::optional<std::string> description;
  std::vector<std::string> aliases;
};

struct KgFact {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const KgFact &) const = default;
  bool operator==(const KgFact &) const = default;
};

struct KgFactHash {
  size_t operator()(const KgFact &fact) const;
};

// Immutable after construction; safe to share between readers.
class KgStore {
 public:
  KgStore() = default;

  // Validates and indexes. Entries keep their input order; duplicate facts
  // are collapsed to the first occurrence. Throws DuplicateId,
  // DanglingFactReference or MalformedRecord.
  static KgStore Build(std::vector<KgEntry> entries, std::vector<KgFact> facts,
                       const SurfaceOptions &options = {});

  const std::vector<KgEntry> &entries() const { return entries_; }
  const std::vector<KgFact> &facts() const { return facts_; }
  const SurfaceOptions &surface_options() const { return options_; }

  // Ids of all entities (resp. predicates), in entry order.
  const std::vector<std::string> &entity_ids() const { return entity_ids_; }
  const std::vector<std::string> &predicate_ids() const {
    return predicate_ids_;
  }
  const std::vector<std::string> &ids_of(EntryKind kind) const {
    return kind == EntryKind::kEntity ? entity_ids_ : predicate_ids_;
  }

  const KgEntry *Find(std::string_view id) const;
  // Throws UnknownId.
  const KgEntry &Get(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }
  bool HasFact(const KgFact &fact) const;

  // Number of facts referencing `id` in any position.
  size_t Frequency(std::string_view id) const;

  // All entity ids whose label or any alias equals `surface` after
  // normalization, in ascending id order.
  std::vector<std::string> LookupSurface(std::string_view surface) const;

 private:
  SurfaceOptions options_;
  std::vector<KgEntry> entries_;
  std::vector<KgFact> facts_;
  std::vector<std::string> entity_ids_;
  std::vector<std::string> predicate_ids_;
  std::unordered_map<std::string, size_t> by_id_;
  std::unordered_map<KgFact, size_t, KgFactHash> fact_index_;
  std::unordered_map<std::string, size_t> frequency_;
  std::unordered_map<std::string, std::vector<std::string>> surface_index_;
};

// Parses line-delimited entry and fact records. Errors name the offending
// line of the source.
KgStore LoadKg(std::istream &entries, std::istream &facts,
               const SurfaceOptions &options = {});
KgStore LoadKgFiles(const std::filesystem::path &entries,
                    const std::filesystem::path &facts,
                    const SurfaceOptions &options = {});

Json EntryToJson(const KgEntry &entry);
Json FactToJson(const KgFact &fact);

// Keeps entries referenced by at least `min_count` facts, and facts whose
// three entries survive, repeating until nothing changes.
KgStore FilterByFrequency(const KgStore &store, size_t min_count);

// Sub-store with exactly the entries referenced by `facts`, plus every
// stored fact over those entries. Throws UnknownId.
KgStore RestrictToFacts(const KgStore &store, std::span<const KgFact> facts);

// "label <DESC> description", "label <DESC> <mask>" or just "label".
std::string EntryText(const KgEntry &entry, bool mask_description);

}  // namespace factlink

#endif  // FACTLINK_KG_STORE_H_
