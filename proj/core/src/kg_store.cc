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

#include "factlink/kg_store.h"

#include <algorithm>
#include <istream>
#include <set>
#include <unordered_set>

#include "factlink/random.h"
#include "factlink/status.h"

namespace factlink {

std::string_view EntryKindName(EntryKind kind) {
  return kind == EntryKind::kEntity ? "entity" : "predicate";
}

size_t KgFactHash::operator()(const KgFact &fact) const {
  uint64_t h = Fnv1a64(fact.subject);
  h = h * 31 + Fnv1a64(fact.predicate);
  h = h * 31 + Fnv1a64(fact.object);
  return static_cast<size_t>(h);
}

namespace {

// Checks the per-entry invariants; `where` prefixes error messages.
void ValidateEntry(const KgEntry &entry, const std::string &where) {
  if (entry.id.empty()) {
    throw Error(ErrorCode::kMalformedRecord, where + "empty id");
  }
  if (entry.label.empty()) {
    throw Error(ErrorCode::kMalformedRecord,
                where + "empty label for " + entry.id);
  }
  std::set<std::string_view> seen;
  for (const std::string &alias : entry.aliases) {
    if (alias == entry.label) {
      throw Error(ErrorCode::kMalformedRecord,
                  where + "alias repeats the label of " + entry.id);
    }
    if (!seen.insert(alias).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  where + "duplicate alias '" + alias + "' on " + entry.id);
    }
  }
}

}  // namespace

KgStore KgStore::Build(std::vector<KgEntry> entries, std::vector<KgFact> facts,
                       const SurfaceOptions &options) {
  KgStore store;
  store.options_ = options;
  store.entries_ = std::move(entries);
  for (size_t i = 0; i < store.entries_.size(); ++i) {
    KgEntry &entry = store.entries_[i];
    if (entry.description && entry.description->empty()) {
      entry.description.reset();
    }
    ValidateEntry(entry, "");
    if (!store.by_id_.emplace(entry.id, i).second) {
      throw Error(ErrorCode::kDuplicateId, entry.id);
    }
    if (entry.kind == EntryKind::kEntity) {
      store.entity_ids_.push_back(entry.id);
      auto add_surface = [&](const std::string &surface) {
        auto &ids = store.surface_index_[NormalizeSurface(surface, options)];
        if (std::find(ids.begin(), ids.end(), entry.id) == ids.end()) {
          ids.push_back(entry.id);
        }
      };
      add_surface(entry.label);
      for (const std::string &alias : entry.aliases) add_surface(alias);
    } else {
      store.predicate_ids_.push_back(entry.id);
    }
  }
  for (auto &[surface, ids] : store.surface_index_) {
    std::sort(ids.begin(), ids.end());
  }

  auto require_kind = [&](const std::string &id, EntryKind kind) {
    const KgEntry *entry = store.Find(id);
    if (entry == nullptr) {
      throw Error(ErrorCode::kDanglingFactReference, id);
    }
    if (entry->kind != kind) {
      throw Error(ErrorCode::kMalformedRecord,
                  id + " is not a " + std::string(EntryKindName(kind)));
    }
  };
  for (KgFact &fact : facts) {
    require_kind(fact.subject, EntryKind::kEntity);
    require_kind(fact.predicate, EntryKind::kPredicate);
    require_kind(fact.object, EntryKind::kEntity);
    if (store.fact_index_.contains(fact)) continue;
    store.fact_index_.emplace(fact, store.facts_.size());
    ++store.frequency_[fact.subject];
    ++store.frequency_[fact.predicate];
    ++store.frequency_[fact.object];
    store.facts_.push_back(std::move(fact));
  }
  return store;
}

const KgEntry *KgStore::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

const KgEntry &KgStore::Get(std::string_view id) const {
  const KgEntry *entry = Find(id);
  if (entry == nullptr) throw Error(ErrorCode::kUnknownId, std::string(id));
  return *entry;
}

bool KgStore::HasFact(const KgFact &fact) const {
  return fact_index_.contains(fact);
}

size_t KgStore::Frequency(std::string_view id) const {
  auto it = frequency_.find(std::string(id));
  return it == frequency_.end() ? 0 : it->second;
}

std::vector<std::string> KgStore::LookupSurface(std::string_view surface) const {
  auto it = surface_index_.find(NormalizeSurface(surface, options_));
  if (it == surface_index_.end()) return {};
  return it->second;
}

KgStore LoadKg(std::istream &entries_in, std::istream &facts_in,
               const SurfaceOptions &options) {
  std::vector<KgEntry> entries;
  std::unordered_map<std::string, EntryKind> entry_kind;
  ForEachRecord(entries_in, "entries", [&](size_t line, const Json &record) {
    RecordReader reader(record, "entries", line);
    KgEntry entry;
    entry.id = reader.RequireString("id");
    const std::string kind = reader.RequireString("kind");
    if (kind == "entity") {
      entry.kind = EntryKind::kEntity;
    } else if (kind == "predicate") {
      entry.kind = EntryKind::kPredicate;
    } else {
      reader.Fail("unknown kind '" + kind + "'");
    }
    entry.label = reader.RequireString("label");
    entry.description = reader.OptionalString("description");
    entry.aliases = reader.StringList("aliases");
    const std::string where = "entries:" + std::to_string(line) + ": ";
    ValidateEntry(entry, where);
    if (!entry_kind.emplace(entry.id, entry.kind).second) {
      throw Error(ErrorCode::kDuplicateId, where + entry.id);
    }
    entries.push_back(std::move(entry));
  });

  std::vector<KgFact> facts;
  ForEachRecord(facts_in, "facts", [&](size_t line, const Json &record) {
    RecordReader reader(record, "facts", line);
    KgFact fact{reader.RequireString("subject"),
                reader.RequireString("predicate"),
                reader.RequireString("object")};
    const std::pair<const std::string *, EntryKind> slots[] = {
        {&fact.subject, EntryKind::kEntity},
        {&fact.predicate, EntryKind::kPredicate},
        {&fact.object, EntryKind::kEntity}};
    for (const auto &[id, kind] : slots) {
      auto it = entry_kind.find(*id);
      if (it == entry_kind.end()) {
        throw Error(ErrorCode::kDanglingFactReference,
                    "facts:" + std::to_string(line) + ": " + *id);
      }
      if (it->second != kind) {
        reader.Fail(*id + " is not a " + std::string(EntryKindName(kind)));
      }
    }
    facts.push_back(std::move(fact));
  });
  return KgStore::Build(std::move(entries), std::move(facts), options);
}

KgStore LoadKgFiles(const std::filesystem::path &entries,
                    const std::filesystem::path &facts,
                    const SurfaceOptions &options) {
  std::ifstream entries_in = OpenForRead(entries);
  std::ifstream facts_in = OpenForRead(facts);
  return LoadKg(entries_in, facts_in, options);
}

Json EntryToJson(const KgEntry &entry) {
  Json record = {{"id", entry.id},
                 {"kind", EntryKindName(entry.kind)},
                 {"label", entry.label}};
  if (entry.description) record["description"] = *entry.description;
  record["aliases"] = entry.aliases;
  return record;
}

Json FactToJson(const KgFact &fact) {
  return Json{{"subject", fact.subject},
              {"predicate", fact.predicate},
              {"object", fact.object}};
}

KgStore FilterByFrequency(const KgStore &store, size_t min_count) {
  if (min_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_count must be positive");
  }
  std::unordered_set<std::string> alive;
  for (const KgEntry &entry : store.entries()) alive.insert(entry.id);
  std::vector<const KgFact *> facts;
  for (const KgFact &fact : store.facts()) facts.push_back(&fact);

  // Removing an entry orphans its facts, which lowers other counts; iterate
  // to the fixpoint.
  for (;;) {
    std::unordered_map<std::string, size_t> counts;
    for (const KgFact *fact : facts) {
      ++counts[fact->subject];
      ++counts[fact->predicate];
      ++counts[fact->object];
    }
    bool changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      if (counts[*it] < min_count) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    std::erase_if(facts, [&](const KgFact *fact) {
      bool dead = !alive.contains(fact->subject) ||
                  !alive.contains(fact->predicate) ||
                  !alive.contains(fact->object);
      changed |= dead;
      return dead;
    });
    if (!changed) break;
  }

  std::vector<KgEntry> entries;
  for (const KgEntry &entry : store.entries()) {
    if (alive.contains(entry.id)) entries.push_back(entry);
  }
  std::vector<KgFact> kept;
  for (const KgFact *fact : facts) kept.push_back(*fact);
  return KgStore::Build(std::move(entries), std::move(kept),
                        store.surface_options());
}

KgStore RestrictToFacts(const KgStore &store, std::span<const KgFact> facts) {
  std::unordered_set<std::string> referenced;
  for (const KgFact &fact : facts) {
    for (const std::string *id : {&fact.subject, &fact.predicate,
                                  &fact.object}) {
      if (!store.Contains(*id)) throw Error(ErrorCode::kUnknownId, *id);
      referenced.insert(*id);
    }
  }
  std::vector<KgEntry> entries;
  for (const KgEntry &entry : store.entries()) {
    if (referenced.contains(entry.id)) entries.push_back(entry);
  }
  std::vector<KgFact> kept;
  for (const KgFact &fact : store.facts()) {
    if (referenced.contains(fact.subject) &&
        referenced.contains(fact.predicate) &&
        referenced.contains(fact.object)) {
      kept.push_back(fact);
    }
  }
  return KgStore::Build(std::move(entries), std::move(kept),
                        store.surface_options());
}

std::string EntryText(const KgEntry &entry, bool mask_description) {
  if (!entry.description) return entry.label;
  std::string text = entry.label;
  text += ' ';
  text += kDescMarker;
  text += ' ';
  if (mask_description) {
    text += kMaskMarker;
  } else {
    text += *entry.description;
  }
  return text;
}

}  // namespace factlink
