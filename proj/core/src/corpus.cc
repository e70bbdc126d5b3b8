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

#include "factlink/corpus.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include "factlink/random.h"
#include "factlink/status.h"

namespace factlink {

std::string_view SlotName(Slot slot) {
  switch (slot) {
    case Slot::kSubject: return "subject";
    case Slot::kRelation: return "relation";
    case Slot::kObject: return "object";
  }
  return "";
}

const std::string &FactSlot(const KgFact &fact, Slot slot) {
  switch (slot) {
    case Slot::kSubject: return fact.subject;
    case Slot::kRelation: return fact.predicate;
    case Slot::kObject: return fact.object;
  }
  return fact.subject;
}

std::string &FactSlot(KgFact &fact, Slot slot) {
  return const_cast<std::string &>(
      FactSlot(static_cast<const KgFact &>(fact), slot));
}

const std::string &OieTriple::slot(Slot s) const {
  switch (s) {
    case Slot::kSubject: return subject;
    case Slot::kRelation: return relation;
    case Slot::kObject: return object;
  }
  return subject;
}

void ValidateOie(const OieTriple &triple) {
  for (Slot s : kAllSlots) {
    const std::string &text = triple.slot(s);
    if (TrimWhitespace(text).empty()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "blank " + std::string(SlotName(s)) + " slot");
    }
    if (auto marker = FindReservedMarker(text)) {
      throw Error(ErrorCode::kMalformedRecord,
                  std::string(SlotName(s)) + " slot '" + text +
                      "' contains reserved marker " + std::string(*marker));
    }
  }
}

std::string OieText(const OieTriple &triple, bool with_context) {
  std::string text;
  text.reserve(triple.subject.size() + triple.relation.size() +
               triple.object.size() + 24);
  text += kSubjMarker;
  text += ' ';
  text += triple.subject;
  text += ' ';
  text += kRelMarker;
  text += ' ';
  text += triple.relation;
  text += ' ';
  text += kObjMarker;
  text += ' ';
  text += triple.object;
  if (with_context) {
    if (!triple.sentence) {
      throw Error(ErrorCode::kMissingContext,
                  "triple has no sentence: " + text);
    }
    text += ' ';
    text += kSentMarker;
    text += ' ';
    text += *triple.sentence;
  }
  return text;
}

std::string OieKey(const OieTriple &triple) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(
                    Fnv1a64(OieText(triple, /*with_context=*/false))));
  return buffer;
}

std::string_view PartitionName(Partition partition) {
  switch (partition) {
    case Partition::kTrain: return "train";
    case Partition::kValidation: return "validation";
    case Partition::kTest: return "test";
  }
  return "";
}

Partition ParsePartition(std::string_view name) {
  if (name == "train") return Partition::kTrain;
  if (name == "validation" || name == "val") return Partition::kValidation;
  if (name == "test") return Partition::kTest;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown partition '" + std::string(name) + "'");
}

namespace {

struct NormalizedTriple {
  std::string subject, relation, object;
  auto operator<=>(const NormalizedTriple &) const = default;
};

NormalizedTriple Normalize(const OieTriple &t, const SurfaceOptions &options) {
  return {NormalizeSurface(t.subject, options),
          NormalizeSurface(t.relation, options),
          NormalizeSurface(t.object, options)};
}

bool AlignmentLess(const Alignment &a, const Alignment &b) {
  return std::tie(a.sentence_id, a.fact, a.oie.subject, a.oie.relation,
                  a.oie.object, a.augmented) <
         std::tie(b.sentence_id, b.fact, b.oie.subject, b.oie.relation,
                  b.oie.object, b.augmented);
}

}  // namespace

std::vector<Alignment> Align(std::span<const SentenceOie> oies,
                             std::span<const SentenceFactPair> pairs,
                             const KgStore &store,
                             const AlignOptions &options) {
  std::map<std::string, std::vector<const OieTriple *>> by_sentence;
  std::map<std::string, std::set<NormalizedTriple>> seen;
  for (const SentenceOie &oie : oies) {
    ValidateOie(oie.triple);
    if (seen[oie.sentence_id].insert(Normalize(oie.triple, options.surface))
            .second) {
      by_sentence[oie.sentence_id].push_back(&oie.triple);
    }
  }

  std::vector<Alignment> out;
  std::set<std::tuple<std::string, NormalizedTriple, KgFact>> emitted;
  for (const SentenceFactPair &pair : pairs) {
    const KgEntry *subject = store.Find(pair.fact.subject);
    const KgEntry *object = store.Find(pair.fact.object);
    // Facts over entries absent from the store (e.g. frequency-filtered)
    // cannot be aligned.
    if (subject == nullptr || object == nullptr ||
        !store.Contains(pair.fact.predicate)) {
      continue;
    }
    auto it = by_sentence.find(pair.sentence_id);
    if (it == by_sentence.end()) continue;
    const std::string subject_target = NormalizeSurface(
        pair.subject_mention.value_or(subject->label), options.surface);
    const std::string object_target = NormalizeSurface(
        pair.object_mention.value_or(object->label), options.surface);
    for (const OieTriple *triple : it->second) {
      NormalizedTriple norm = Normalize(*triple, options.surface);
      if (norm.subject != subject_target || norm.object != object_target) {
        continue;
      }
      if (!emitted.emplace(pair.sentence_id, norm, pair.fact).second) continue;
      Alignment alignment;
      alignment.sentence_id = pair.sentence_id;
      alignment.oie = *triple;
      if (!alignment.oie.sentence) alignment.oie.sentence = pair.sentence;
      alignment.fact = pair.fact;
      alignment.partition = pair.partition;
      out.push_back(std::move(alignment));
    }
  }
  std::sort(out.begin(), out.end(), AlignmentLess);
  return out;
}

std::vector<Alignment> AugmentAliases(std::span<const Alignment> alignments,
                                      const KgStore &store) {
  std::vector<Alignment> out;
  for (const Alignment &original : alignments) {
    out.push_back(original);
    auto surfaces = [&](const std::string &original_text,
                        const std::string &id) {
      std::vector<std::string> texts = {original_text};
      for (const std::string &alias : store.Get(id).aliases) {
        if (std::find(texts.begin(), texts.end(), alias) == texts.end()) {
          texts.push_back(alias);
        }
      }
      return texts;
    };
    const auto subjects = surfaces(original.oie.subject, original.fact.subject);
    const auto objects = surfaces(original.oie.object, original.fact.object);
    for (size_t i = 0; i < subjects.size(); ++i) {
      for (size_t j = 0; j < objects.size(); ++j) {
        if (i == 0 && j == 0) continue;
        Alignment augmented = original;
        augmented.oie.subject = subjects[i];
        augmented.oie.object = objects[j];
        augmented.augmented = true;
        out.push_back(std::move(augmented));
      }
    }
  }
  return out;
}

std::vector<Alignment> RemoveLeakage(std::span<const Alignment> train,
                                     std::span<const Alignment> test,
                                     const SurfaceOptions &options) {
  std::set<std::pair<NormalizedTriple, KgFact>> test_pairs;
  for (const Alignment &a : test) {
    test_pairs.emplace(Normalize(a.oie, options), a.fact);
  }
  std::vector<Alignment> out;
  for (const Alignment &a : train) {
    if (!test_pairs.contains({Normalize(a.oie, options), a.fact})) {
      out.push_back(a);
    }
  }
  return out;
}

KgStore RestrictToBenchmark(const KgStore &store,
                            std::span<const Alignment> alignments) {
  std::vector<KgFact> facts;
  facts.reserve(alignments.size());
  for (const Alignment &a : alignments) facts.push_back(a.fact);
  return RestrictToFacts(store, facts);
}

std::vector<SentenceOie> LoadOies(std::istream &in) {
  std::vector<SentenceOie> out;
  ForEachRecord(in, "oie", [&](size_t line, const Json &record) {
    RecordReader reader(record, "oie", line);
    SentenceOie oie;
    oie.sentence_id = reader.RequireString("sentence_id");
    oie.triple.subject = reader.RequireString("subject");
    oie.triple.relation = reader.RequireString("relation");
    oie.triple.object = reader.RequireString("object");
    oie.triple.extractor = reader.OptionalString("extractor");
    oie.triple.sentence = reader.OptionalString("sentence");
    try {
      ValidateOie(oie.triple);
    } catch (const Error &e) {
      reader.Fail(e.what());
    }
    out.push_back(std::move(oie));
  });
  return out;
}

std::vector<SentenceFactPair> LoadPairs(std::istream &in) {
  std::vector<SentenceFactPair> out;
  ForEachRecord(in, "pairs", [&](size_t line, const Json &record) {
    RecordReader reader(record, "pairs", line);
    SentenceFactPair pair;
    pair.sentence_id = reader.RequireString("sentence_id");
    pair.sentence = reader.RequireString("sentence");
    pair.fact = {reader.RequireString("subject"),
                 reader.RequireString("predicate"),
                 reader.RequireString("object")};
    pair.subject_mention = reader.OptionalString("subject_mention");
    pair.object_mention = reader.OptionalString("object_mention");
    if (auto split = reader.OptionalString("split")) {
      try {
        pair.partition = ParsePartition(*split);
      } catch (const Error &e) {
        reader.Fail(e.what());
      }
    }
    out.push_back(std::move(pair));
  });
  return out;
}

Json AlignmentToJson(const Alignment &a) {
  Json record = {{"id", OieKey(a.oie)},
                 {"sentence_id", a.sentence_id},
                 {"subject", a.oie.subject},
                 {"relation", a.oie.relation},
                 {"object", a.oie.object}};
  if (a.oie.sentence) record["sentence"] = *a.oie.sentence;
  if (a.oie.extractor) record["extractor"] = *a.oie.extractor;
  record["fact"] = FactToJson(a.fact);
  record["augmented"] = a.augmented;
  record["partition"] = PartitionName(a.partition);
  return record;
}

std::vector<Alignment> LoadAlignments(std::istream &in) {
  std::vector<Alignment> out;
  ForEachRecord(in, "alignments", [&](size_t line, const Json &record) {
    RecordReader reader(record, "alignments", line);
    Alignment a;
    a.sentence_id = reader.RequireString("sentence_id");
    a.oie.subject = reader.RequireString("subject");
    a.oie.relation = reader.RequireString("relation");
    a.oie.object = reader.RequireString("object");
    a.oie.sentence = reader.OptionalString("sentence");
    a.oie.extractor = reader.OptionalString("extractor");
    auto fact = record.find("fact");
    if (fact == record.end() || !fact->is_object()) {
      reader.Fail("missing fact object");
    }
    RecordReader fact_reader(*fact, "alignments", line);
    a.fact = {fact_reader.RequireString("subject"),
              fact_reader.RequireString("predicate"),
              fact_reader.RequireString("object")};
    a.augmented = reader.OptionalBool("augmented", false);
    if (auto partition = reader.OptionalString("partition")) {
      try {
        a.partition = ParsePartition(*partition);
      } catch (const Error &e) {
        reader.Fail(e.what());
      }
    }
    out.push_back(std::move(a));
  });
  return out;
}

std::vector<Alignment> LoadAlignmentsFile(const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  return LoadAlignments(in);
}

Json OieToJson(const SentenceOie &oie) {
  Json record = {{"sentence_id", oie.sentence_id},
                 {"subject", oie.triple.subject},
                 {"relation", oie.triple.relation},
                 {"object", oie.triple.object}};
  if (oie.triple.extractor) record["extractor"] = *oie.triple.extractor;
  return record;
}

Json PairToJson(const SentenceFactPair &pair) {
  Json record = {{"sentence_id", pair.sentence_id},
                 {"sentence", pair.sentence},
                 {"subject", pair.fact.subject},
                 {"predicate", pair.fact.predicate},
                 {"object", pair.fact.object}};
  if (pair.subject_mention) record["subject_mention"] = *pair.subject_mention;
  if (pair.object_mention) record["object_mention"] = *pair.object_mention;
  record["split"] = PartitionName(pair.partition);
  return record;
}

}  // namespace factlink
