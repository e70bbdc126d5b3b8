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

// Small hand-built KG around the Michael Jordan example, shared by tests.

#ifndef FACTLINK_TESTS_FIXTURES_H_
#define FACTLINK_TESTS_FIXTURES_H_

#include <filesystem>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/kg_store.h"
#include "factlink/random.h"

namespace factlink::testing {

inline KgEntry Entity(std::string id, std::string label,
                      std::optional<std::string> description = std::nullopt,
                      std::vector<std::string> aliases = {}) {
  return {std::move(id), EntryKind::kEntity, std::move(label),
          std::move(description), std::move(aliases)};
}

inline KgEntry Predicate(std::string id, std::string label,
                         std::optional<std::string> description = std::nullopt) {
  return {std::move(id), EntryKind::kPredicate, std::move(label),
          std::move(description), {}};
}

inline std::vector<KgEntry> JordanEntries() {
  return {
      Entity("Q41421", "Michael Jordan",
             "American basketball player and businessman",
             {"Air Jordan", "M.J.", "His Airness"}),
      Entity("Q3308205", "Michael Jordan", "American computer scientist"),
      Entity("Q128109", "Chicago Bulls", "American professional basketball team",
             {"The Bulls"}),
      Entity("Q659400", "Wilmington", "city in North Carolina"),
      Entity("Q3385492", "Pierre Hétu", "Canadian conductor"),
      Entity("Q340", "Montreal", "city in Quebec, Canada"),
      Predicate("P54", "member of sports team",
                "sports teams or clubs that the subject represents or "
                "represented"),
      Predicate("P19", "place of birth",
                "most specific known birth location of a person, animal or "
                "fictional character"),
      Predicate("P551", "residence"),
  };
}

inline std::vector<KgFact> JordanFacts() {
  return {
      {"Q41421", "P54", "Q128109"},
      {"Q41421", "P551", "Q659400"},
      {"Q3308205", "P551", "Q659400"},
      {"Q3385492", "P19", "Q340"},
  };
}

inline KgStore JordanStore() {
  return KgStore::Build(JordanEntries(), JordanFacts());
}

inline OieTriple Triple(std::string s, std::string r, std::string o,
                        std::optional<std::string> sentence = std::nullopt) {
  OieTriple t;
  t.subject = std::move(s);
  t.relation = std::move(r);
  t.object = std::move(o);
  t.sentence = std::move(sentence);
  return t;
}

inline Alignment MakeAlignment(std::string sentence_id, OieTriple oie,
                               KgFact fact,
                               Partition partition = Partition::kTrain) {
  Alignment a;
  a.sentence_id = std::move(sentence_id);
  a.oie = std::move(oie);
  a.fact = std::move(fact);
  a.partition = partition;
  return a;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("factlink_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Random world of `n_facts` distinct facts over 20 entities and 6
// predicates, each fact aligned once to a train or test OIE. Entity labels
// repeat every 8 ids so some surfaces are polysemous.
struct ConstructedWorld {
  KgStore store;
  std::vector<Alignment> train;
  std::vector<Alignment> test;
};

inline ConstructedWorld MakeConstructedWorld(uint64_t seed,
                                             size_t n_facts = 50) {
  Rng rng(seed);
  std::vector<KgEntry> entries;
  for (int i = 0; i < 20; ++i)
    entries.push_back(Entity("E" + std::to_string(i),
                             "entity " + std::to_string(i % 8)));
  for (int i = 0; i < 6; ++i)
    entries.push_back(Predicate("R" + std::to_string(i),
                                "relation " + std::to_string(i)));
  std::set<std::tuple<int, int, int>> seen;
  std::vector<KgFact> facts;
  while (facts.size() < n_facts) {
    const int s = static_cast<int>(rng.Uniform(20));
    const int r = static_cast<int>(rng.Uniform(6));
    const int o = static_cast<int>(rng.Uniform(20));
    if (s == o || !seen.insert({s, r, o}).second) continue;
    facts.push_back({"E" + std::to_string(s), "R" + std::to_string(r),
                     "E" + std::to_string(o)});
  }
  ConstructedWorld world{KgStore::Build(entries, facts), {}, {}};
  for (size_t i = 0; i < facts.size(); ++i) {
    const KgFact &f = facts[i];
    const bool is_test = rng.Bernoulli(0.4);
    Alignment a = MakeAlignment(
        "s" + std::to_string(i),
        Triple(world.store.Get(f.subject).label,
               world.store.Get(f.predicate).label,
               world.store.Get(f.object).label),
        f, is_test ? Partition::kTest : Partition::kTrain);
    (is_test ? world.test : world.train).push_back(std::move(a));
  }
  return world;
}

}  // namespace factlink::testing

#endif  // FACTLINK_TESTS_FIXTURES_H_
