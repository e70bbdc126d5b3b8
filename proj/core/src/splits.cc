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

#include "factlink/splits.h"

#include <set>
#include <unordered_set>

#include "factlink/status.h"

namespace factlink {

std::string_view SplitKindName(SplitKind kind) {
  switch (kind) {
    case SplitKind::kTransductive: return "transductive";
    case SplitKind::kInductive: return "inductive";
    case SplitKind::kPolysemous: return "polysemous";
    case SplitKind::kOutOfKg: return "out_of_kg";
  }
  return "";
}

SplitKind ParseSplitKind(std::string_view name) {
  if (name == "transductive") return SplitKind::kTransductive;
  if (name == "inductive") return SplitKind::kInductive;
  if (name == "polysemous") return SplitKind::kPolysemous;
  if (name == "out_of_kg" || name == "out-of-kg" || name == "ookg") {
    return SplitKind::kOutOfKg;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown split kind '" + std::string(name) + "'");
}

InductiveMode ParseInductiveMode(std::string_view name) {
  if (name == "any") return InductiveMode::kAnyEntityUnseen;
  if (name == "all") return InductiveMode::kAllEntitiesUnseen;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown inductive mode '" + std::string(name) + "'");
}

namespace {

struct SeenSets {
  std::unordered_set<std::string> entities;
  std::unordered_set<std::string> predicates;
  std::set<KgFact> facts;
};

SeenSets CollectSeen(std::span<const Alignment> train) {
  SeenSets seen;
  for (const Alignment &a : train) {
    seen.entities.insert(a.fact.subject);
    seen.entities.insert(a.fact.object);
    seen.predicates.insert(a.fact.predicate);
    seen.facts.insert(a.fact);
  }
  return seen;
}

template <typename Keep>
SplitResult Filter(SplitKind kind, std::span<const Alignment> test,
                   Keep keep) {
  SplitResult result;
  result.kind = kind;
  for (const Alignment &a : test) {
    if (keep(a)) result.alignments.push_back(a);
  }
  result.stats = ComputeStats(result.alignments);
  return result;
}

}  // namespace

SplitStats ComputeStats(std::span<const Alignment> alignments) {
  std::unordered_set<std::string> entities, predicates;
  std::set<KgFact> facts;
  for (const Alignment &a : alignments) {
    entities.insert(a.fact.subject);
    entities.insert(a.fact.object);
    predicates.insert(a.fact.predicate);
    facts.insert(a.fact);
  }
  return {alignments.size(), entities.size(), predicates.size(), facts.size()};
}

SplitResult TransductiveSplit(std::span<const Alignment> test,
                              std::span<const Alignment> train) {
  const SeenSets seen = CollectSeen(train);
  return Filter(SplitKind::kTransductive, test, [&](const Alignment &a) {
    return seen.entities.contains(a.fact.subject) &&
           seen.predicates.contains(a.fact.predicate) &&
           seen.entities.contains(a.fact.object) &&
           !seen.facts.contains(a.fact);
  });
}

SplitResult InductiveSplit(std::span<const Alignment> test,
                           std::span<const Alignment> train,
                           InductiveMode mode) {
  const SeenSets seen = CollectSeen(train);
  return Filter(SplitKind::kInductive, test, [&](const Alignment &a) {
    const bool subject_unseen = !seen.entities.contains(a.fact.subject);
    const bool object_unseen = !seen.entities.contains(a.fact.object);
    return mode == InductiveMode::kAnyEntityUnseen
               ? (subject_unseen || object_unseen)
               : (subject_unseen && object_unseen);
  });
}

SplitResult PolysemousSplit(std::span<const Alignment> test,
                            const KgStore &store) {
  return Filter(SplitKind::kPolysemous, test, [&](const Alignment &a) {
    return store.LookupSurface(a.oie.subject).size() >= 2 ||
           store.LookupSurface(a.oie.object).size() >= 2;
  });
}

SplitResult OutOfKgSplit(std::span<const Alignment> test,
                         std::span<const Alignment> train) {
  const SeenSets seen = CollectSeen(train);
  return Filter(SplitKind::kOutOfKg, test, [&](const Alignment &a) {
    return !seen.entities.contains(a.fact.subject) &&
           !seen.entities.contains(a.fact.object) &&
           !seen.predicates.contains(a.fact.predicate);
  });
}

SplitResult MakeSplit(const SplitSpec &spec, std::span<const Alignment> test,
                      std::span<const Alignment> train, const KgStore &store) {
  switch (spec.kind) {
    case SplitKind::kTransductive: return TransductiveSplit(test, train);
    case SplitKind::kInductive:
      return InductiveSplit(test, train, spec.inductive_mode);
    case SplitKind::kPolysemous: return PolysemousSplit(test, store);
    case SplitKind::kOutOfKg: return OutOfKgSplit(test, train);
  }
  throw Error(ErrorCode::kInvalidArgument, "bad split kind");
}

Json StatsToJson(SplitKind kind, const SplitStats &stats) {
  return Json{{"split", SplitKindName(kind)},
              {"# Total Samples", stats.samples},
              {"# Unique Entities", stats.unique_entities},
              {"# Unique Predicates", stats.unique_predicates},
              {"# Unique Facts", stats.unique_facts}};
}

}  // namespace factlink
