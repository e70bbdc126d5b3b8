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

// Seeded generator for a small typed world: KG entries and facts, sentence
// and fact pairs, and OIE extractions. Used by tests, benchmarks and the
// toy-world tool.
//
// Benchmark entities fall into three pools: seen (train, validation and
// transductive test facts), inductive (test facts only) and out-of-KG
// (test facts only, over three predicates never used elsewhere). Person
// homonym pairs share a label and differ only in description; sentences
// mention an entity's type phrase, which the bare triple omits. Distractor
// entries (homonyms and near-spellings) exist only in the full KG.

#ifndef FACTLINK_SYNTHETIC_H_
#define FACTLINK_SYNTHETIC_H_

#include <filesystem>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/jsonl.h"
#include "factlink/kg_store.h"

namespace factlink {

struct ToyWorldConfig {
  uint64_t seed = 0;
  size_t homonym_pairs = 20;
  size_t distractors = 100;
  size_t train_facts = 1100;
  size_t validation_facts = 150;
  size_t transductive_facts = 260;
  size_t inductive_facts = 160;
  size_t ookg_facts = 120;
  size_t max_sentences_per_train_fact = 3;
  size_t max_sentences_per_test_fact = 2;
  double alias_mention_prob = 0.3;
  double type_phrase_prob = 0.9;
  double noise_oie_prob = 0.5;
};

struct ToyWorld {
  std::vector<KgEntry> entries;
  std::vector<KgFact> facts;
  std::vector<SentenceFactPair> pairs;
  std::vector<SentenceOie> oies;
  // Ids of the three predicates that only occur in out-of-KG facts.
  std::vector<std::string> held_out_predicates;
};

ToyWorld GenerateToyWorld(const ToyWorldConfig &config = {});

// Writes kg_entries.jsonl, kg_facts.jsonl, pairs.jsonl and oies.jsonl.
void WriteToyWorld(const ToyWorld &world, const std::filesystem::path &dir,
                   const ArtifactHeader &header = {});

}  // namespace factlink

#endif  // FACTLINK_SYNTHETIC_H_
