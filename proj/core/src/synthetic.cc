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

#include "factlink/synthetic.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <string>

#include "factlink/random.h"
#include "factlink/status.h"

namespace factlink {

namespace {

enum class Type {
  kAthlete,
  kScientist,
  kMusician,
  kPolitician,
  kCity,
  kCountry,
  kTeam,
  kUniversity,
  kCompany,
};

constexpr Type kPersons[] = {Type::kAthlete, Type::kScientist,
                             Type::kMusician, Type::kPolitician};

bool IsPerson(Type t) {
  return std::find(std::begin(kPersons), std::end(kPersons), t) !=
         std::end(kPersons);
}

enum class Pool { kSeen, kInductive, kOutOfKg, kDistractor };

struct Entity {
  std::string id;
  Type type;
  std::string label;
  std::string phrase;  // type phrase used in sentences, e.g. "tennis player"
  std::string description;
  std::vector<std::string> aliases;
  Pool pool = Pool::kSeen;
};

struct PredicateSpec {
  const char *label;
  const char *description;
  std::vector<Type> domain;
  std::vector<Type> range;
  std::vector<const char *> paraphrases;
  double weight;
  bool held_out;
};

std::vector<Type> PersonTypes() {
  return {std::begin(kPersons), std::end(kPersons)};
}

std::vector<PredicateSpec> Predicates() {
  const auto person = PersonTypes();
  return {
      {"place of birth", "where the person was born", person, {Type::kCity},
       {"was born in", "is a native of", "hails from"}, 10, false},
      {"place of death", "where the person died", person, {Type::kCity},
       {"died in", "passed away in"}, 3, false},
      {"country of citizenship", "country the person is a citizen of", person,
       {Type::kCountry}, {"is a citizen of", "holds citizenship of",
                          "is a national of"}, 6, false},
      {"educated at", "educational institution attended", person,
       {Type::kUniversity}, {"studied at", "graduated from", "attended"}, 5,
       false},
      {"member of sports team", "team the athlete plays for",
       {Type::kAthlete}, {Type::kTeam}, {"played for", "signed with",
                                         "plays for"}, 4, false},
      {"employer", "organization the person works for", {Type::kScientist},
       {Type::kUniversity, Type::kCompany}, {"worked at", "is employed by",
                                             "joined"}, 3, false},
      {"record label", "label the musician records for", {Type::kMusician},
       {Type::kCompany}, {"signed to", "records for"}, 2, false},
      {"located in", "country containing the city", {Type::kCity},
       {Type::kCountry}, {"is located in", "is a city in", "lies in"}, 4,
       false},
      {"capital of", "country whose capital is the city", {Type::kCity},
       {Type::kCountry}, {"is the capital of", "serves as capital of"}, 1,
       false},
      {"headquarters location", "city of the main office", {Type::kCompany},
       {Type::kCity}, {"is headquartered in", "is based in"}, 3, false},
      {"home city", "city the team plays in", {Type::kTeam}, {Type::kCity},
       {"plays home games in", "is from"}, 2, false},
      {"campus location", "city of the campus", {Type::kUniversity},
       {Type::kCity}, {"sits in", "has its campus in"}, 2, false},
      {"owned by", "parent organization", {Type::kCompany}, {Type::kCompany},
       {"is owned by", "is a subsidiary of"}, 1, false},
      {"sponsor", "organization sponsoring the team", {Type::kTeam},
       {Type::kCompany}, {"is sponsored by"}, 1, false},
      {"residence", "where the person lives", person, {Type::kCity},
       {"lives in", "resides in"}, 3, false},
      {"head of government", "country the politician governs",
       {Type::kPolitician}, {Type::kCountry}, {"led", "governed"}, 1, false},
      {"country", "country of registration",
       {Type::kCompany, Type::kUniversity}, {Type::kCountry},
       {"operates in", "is registered in"}, 1, false},
      {"spouse", "the person's husband or wife", person, person,
       {"married", "is the spouse of", "wed"}, 1, true},
      {"founded by", "founder of the organization", {Type::kCompany}, person,
       {"was founded by", "was started by"}, 1, true},
      {"twinned with", "partner city", {Type::kCity}, {Type::kCity},
       {"is twinned with", "is a sister city of"}, 1, true},
  };
}

constexpr const char *kSyllables[] = {
    "ka", "lo", "mi", "ren", "tor", "vel", "sa", "dun", "bri", "mo",
    "zel", "fa", "ni", "gar", "tu", "pe", "xan", "lu", "dor", "vi",
    "ha", "quo", "ber", "ist", "ol", "rim", "ta", "ek", "nor", "sul",
    "jin", "cas", "wen", "ply", "ost", "gre", "mab", "ux", "shi", "dro"};

class NameMaker {
 public:
  explicit NameMaker(Rng &rng) : rng_(rng) {}

  std::string Word(size_t min_syllables, size_t max_syllables) {
    for (;;) {
      const size_t n =
          min_syllables + rng_.Uniform(max_syllables - min_syllables + 1);
      std::string w;
      for (size_t i = 0; i < n; ++i) {
        w += kSyllables[rng_.Uniform(std::size(kSyllables))];
      }
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      if (used_.insert(w).second) return w;
    }
  }

  // Reserves a full label; false if already taken.
  bool Claim(const std::string &label) { return used_.insert(label).second; }

 private:
  Rng &rng_;
  std::set<std::string> used_;
};

template <typename T>
const T &Pick(Rng &rng, const std::vector<T> &items) {
  return items[rng.Uniform(items.size())];
}

std::string Capitalize(std::string s) {
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }
  return s;
}

class WorldBuilder {
 public:
  explicit WorldBuilder(const ToyWorldConfig &config)
      : config_(config),
        rng_(StreamSeed(config.seed, "toy-world")),
        names_(rng_),
        predicates_(Predicates()) {}

  ToyWorld Build() {
    MakeEntities();
    AssignPools();
    MakeFacts();
    MakeDistractors();
    return Emit();
  }

 private:
  Entity &Add(Type type, std::string label, std::string phrase,
              std::string description) {
    Entity e;
    e.id = "Q" + std::to_string(100 + entities_.size());
    e.type = type;
    e.label = std::move(label);
    e.phrase = std::move(phrase);
    e.description = std::move(description);
    entities_.push_back(std::move(e));
    return entities_.back();
  }

  std::vector<size_t> OfType(Type t, std::optional<Pool> pool = {}) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < entities_.size(); ++i) {
      if (entities_[i].type == t && (!pool || entities_[i].pool == *pool)) {
        out.push_back(i);
      }
    }
    return out;
  }

  const std::string &LabelOf(Type t) {
    return entities_[Pick(rng_, OfType(t))].label;
  }

  std::string PersonDescription(Type t, const std::string &topic) {
    const std::string from = " from " + LabelOf(Type::kCountry);
    switch (t) {
      case Type::kAthlete: return topic + " player" + from;
      case Type::kScientist: return topic + " scientist" + from;
      case Type::kMusician: return topic + " singer" + from;
      default: return "politician" + from;
    }
  }

  std::string PersonPhrase(Type t, const std::string &topic) {
    switch (t) {
      case Type::kAthlete: return topic + " player";
      case Type::kScientist: return topic + " scientist";
      case Type::kMusician: return topic + " singer";
      default: return "politician";
    }
  }

  std::string Topic(Type t) {
    static const std::vector<std::string> sports = {"basketball", "football",
                                                    "tennis", "hockey"};
    static const std::vector<std::string> fields = {"physics", "chemistry",
                                                    "biology", "geology"};
    static const std::vector<std::string> genres = {"jazz", "folk", "opera",
                                                    "rock"};
    switch (t) {
      case Type::kAthlete: return Pick(rng_, sports);
      case Type::kScientist: return Pick(rng_, fields);
      case Type::kMusician: return Pick(rng_, genres);
      default: return "";
    }
  }

  Entity &AddPerson(Type t, std::string label) {
    const std::string topic = Topic(t);
    return Add(t, std::move(label), PersonPhrase(t, topic),
               PersonDescription(t, topic));
  }

  void MakeEntities() {
    static const std::vector<std::string> continents = {
        "Aurelia", "Borea", "Cantara", "Drevia", "Estmark"};
    static const std::vector<std::string> mascots = {
        "Falcons", "Rovers", "Titans", "Wolves", "Comets", "Herons", "Bears"};
    static const std::vector<std::string> suffixes = {
        "Industries", "Systems", "Labs", "Motors", "Foods"};
    static const std::vector<std::string> industries = {
        "software", "steel", "media", "food", "energy"};
    static const std::vector<std::string> sports = {"basketball", "football",
                                                    "hockey"};

    for (int i = 0; i < 15; ++i) {
      Add(Type::kCountry, names_.Word(2, 3), "the country",
          "country in " + Pick(rng_, continents));
    }
    for (int i = 0; i < 40; ++i) {
      Add(Type::kCity, names_.Word(2, 3), "the city of",
          "city in " + LabelOf(Type::kCountry));
    }
    for (int i = 0; i < 15; ++i) {
      const std::string city = LabelOf(Type::kCity);
      const std::string sport = Pick(rng_, sports);
      std::string label = city + " " + Pick(rng_, mascots);
      while (!names_.Claim(label)) label = city + " " + names_.Word(2, 2);
      Add(Type::kTeam, label, "the " + sport + " team",
          sport + " team from " + city);
    }
    for (int i = 0; i < 15; ++i) {
      Add(Type::kUniversity, "University of " + names_.Word(2, 3),
          "the university", "university in " + LabelOf(Type::kCity));
    }
    for (int i = 0; i < 15; ++i) {
      const std::string industry = Pick(rng_, industries);
      Add(Type::kCompany, names_.Word(2, 2) + " " + Pick(rng_, suffixes),
          "the " + industry + " company",
          industry + " company from " + LabelOf(Type::kCountry));
    }

    auto person_name = [&] { return names_.Word(2, 2) + " " + names_.Word(2, 3); };
    const size_t pairs = std::min<size_t>(config_.homonym_pairs, 20);
    const std::array<size_t, 4> counts = {30, 30, 20, 20};
    std::array<std::vector<std::string>, 4> labels;
    for (size_t t = 0; t < 4; ++t) {
      for (size_t i = 0; i < counts[t]; ++i) labels[t].push_back(person_name());
    }
    // Athlete/scientist and musician/politician homonym pairs.
    for (size_t i = 0; i < pairs; ++i) {
      if (i % 2 == 0) {
        labels[1][i / 2] = labels[0][i / 2];
      } else {
        labels[3][i / 2] = labels[2][i / 2];
      }
    }
    for (size_t t = 0; t < 4; ++t) {
      for (const std::string &label : labels[t]) AddPerson(kPersons[t], label);
    }

    for (Entity &e : entities_) {
      double p = 0.0;
      if (IsPerson(e.type)) p = 0.5;
      if (e.type == Type::kCity || e.type == Type::kCountry) p = 0.4;
      if (e.type == Type::kCompany) p = 0.3;
      if (rng_.Bernoulli(p)) e.aliases.push_back(names_.Word(2, 3));
    }
  }

  void AssignPools() {
    for (Type t : {Type::kAthlete, Type::kScientist, Type::kMusician,
                   Type::kPolitician, Type::kCity, Type::kCountry, Type::kTeam,
                   Type::kUniversity, Type::kCompany}) {
      std::vector<size_t> ids = OfType(t);
      rng_.Shuffle(ids);
      const bool ookg_type =
          IsPerson(t) || t == Type::kCity || t == Type::kCompany;
      const size_t n = ids.size();
      const size_t seen = (n * 70 + 99) / 100;
      const size_t inductive = ookg_type ? (n * 15 + 99) / 100 : n - seen;
      for (size_t i = 0; i < n; ++i) {
        Pool pool = Pool::kSeen;
        if (i >= seen) pool = Pool::kInductive;
        if (i >= seen + inductive) pool = Pool::kOutOfKg;
        entities_[ids[i]].pool = pool;
      }
    }
  }

  std::vector<size_t> Candidates(const std::vector<Type> &types,
                                 std::initializer_list<Pool> pools) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < entities_.size(); ++i) {
      const Entity &e = entities_[i];
      if (std::find(types.begin(), types.end(), e.type) == types.end()) continue;
      if (std::find(pools.begin(), pools.end(), e.pool) == pools.end()) continue;
      out.push_back(i);
    }
    return out;
  }

  size_t PickPredicate(bool held_out) {
    double total = 0.0;
    for (const auto &p : predicates_) {
      if (p.held_out == held_out) total += p.weight;
    }
    double u = rng_.UniformReal() * total;
    for (size_t i = 0; i < predicates_.size(); ++i) {
      if (predicates_[i].held_out != held_out) continue;
      u -= predicates_[i].weight;
      if (u < 0.0) return i;
    }
    for (size_t i = predicates_.size(); i-- > 0;) {
      if (predicates_[i].held_out == held_out) return i;
    }
    return 0;
  }

  struct Fact {
    size_t subject;
    size_t predicate;
    size_t object;
    Partition partition;
  };

  bool TryAdd(size_t s, size_t p, size_t o, Partition partition) {
    if (s == o) return false;
    if (!used_.insert({s, p, o}).second) return false;
    facts_.push_back({s, p, o, partition});
    return true;
  }

  // Draws `count` facts. `subject_pools`/`object_pools` restrict the pools;
  // `accept` can veto a (subject, object) combination.
  void Sample(size_t count, bool held_out, Partition partition,
              std::initializer_list<Pool> subject_pools,
              std::initializer_list<Pool> object_pools,
              const std::function<bool(size_t, size_t)> &accept) {
    size_t made = 0;
    for (size_t attempts = 0; made < count && attempts < count * 200;
         ++attempts) {
      const size_t p = PickPredicate(held_out);
      const auto subjects = Candidates(predicates_[p].domain, subject_pools);
      const auto objects = Candidates(predicates_[p].range, object_pools);
      if (subjects.empty() || objects.empty()) continue;
      const size_t s = Pick(rng_, subjects);
      const size_t o = Pick(rng_, objects);
      if (!accept(s, o)) continue;
      made += TryAdd(s, p, o, partition);
    }
  }

  void MakeFacts() {
    auto any = [](size_t, size_t) { return true; };
    auto touches_inductive = [&](size_t s, size_t o) {
      return entities_[s].pool == Pool::kInductive ||
             entities_[o].pool == Pool::kInductive;
    };
    Sample(config_.train_facts, false, Partition::kTrain, {Pool::kSeen},
           {Pool::kSeen}, any);
    Sample(config_.validation_facts, false, Partition::kValidation,
           {Pool::kSeen}, {Pool::kSeen}, any);
    Sample(config_.transductive_facts, false, Partition::kTest, {Pool::kSeen},
           {Pool::kSeen}, any);
    Sample(config_.inductive_facts, false, Partition::kTest,
           {Pool::kSeen, Pool::kInductive}, {Pool::kSeen, Pool::kInductive},
           touches_inductive);
    Sample(config_.ookg_facts, true, Partition::kTest, {Pool::kOutOfKg},
           {Pool::kOutOfKg}, any);

    // Every benchmark entity takes part in at least one fact.
    std::vector<bool> covered(entities_.size(), false);
    for (const Fact &f : facts_) covered[f.subject] = covered[f.object] = true;
    for (size_t e = 0; e < entities_.size(); ++e) {
      if (covered[e]) continue;
      const Pool pool = entities_[e].pool;
      const bool held_out = pool == Pool::kOutOfKg;
      const Partition partition =
          pool == Pool::kSeen ? Partition::kTrain : Partition::kTest;
      std::vector<Pool> partners = {Pool::kSeen};
      if (pool == Pool::kInductive) partners.push_back(Pool::kInductive);
      if (held_out) partners = {Pool::kOutOfKg};
      for (size_t attempt = 0; attempt < 500 && !covered[e]; ++attempt) {
        const size_t p = PickPredicate(held_out);
        const auto &spec = predicates_[p];
        const Type t = entities_[e].type;
        const bool as_subject =
            std::find(spec.domain.begin(), spec.domain.end(), t) !=
            spec.domain.end();
        const bool as_object = std::find(spec.range.begin(), spec.range.end(),
                                         t) != spec.range.end();
        if (!as_subject && !as_object) continue;
        const bool subject_side = as_subject && (!as_object || rng_.Bernoulli(0.5));
        std::vector<size_t> others;
        for (size_t i = 0; i < entities_.size(); ++i) {
          const auto &types = subject_side ? spec.range : spec.domain;
          if (std::find(types.begin(), types.end(), entities_[i].type) ==
                  types.end() ||
              std::find(partners.begin(), partners.end(), entities_[i].pool) ==
                  partners.end()) {
            continue;
          }
          others.push_back(i);
        }
        if (others.empty()) continue;
        const size_t other = Pick(rng_, others);
        const bool added = subject_side ? TryAdd(e, p, other, partition)
                                        : TryAdd(other, p, e, partition);
        if (added) covered[e] = covered[other] = true;
      }
    }
  }

  void MakeDistractors() {
    std::vector<size_t> persons, cities;
    for (size_t i = 0; i < entities_.size(); ++i) {
      if (IsPerson(entities_[i].type)) persons.push_back(i);
      if (entities_[i].type == Type::kCity) cities.push_back(i);
    }
    const size_t homonyms = config_.distractors * 6 / 10;
    const size_t benchmark = entities_.size();
    for (size_t i = 0; i < config_.distractors; ++i) {
      const bool person = rng_.Bernoulli(0.7);
      const size_t src = Pick(rng_, person ? persons : cities);
      const Entity original = entities_[src];
      Entity *d = nullptr;
      if (i < homonyms) {
        // Same label, different type.
        if (person) {
          Type t = original.type;
          while (t == original.type) t = kPersons[rng_.Uniform(4)];
          d = &AddPerson(t, original.label);
        } else {
          d = &Add(Type::kCompany, original.label, "the company",
                   "company from " + LabelOf(Type::kCountry));
        }
      } else {
        // Near-spelling, same type.
        std::string label = original.label;
        do {
          label = original.label + kSyllables[rng_.Uniform(std::size(kSyllables))];
        } while (!names_.Claim(label));
        if (person) {
          d = &AddPerson(original.type, label);
        } else {
          d = &Add(Type::kCity, label, "the city of",
                   "city in " + LabelOf(Type::kCountry));
        }
      }
      d->pool = Pool::kDistractor;
    }
    // One KG-only fact per distractor, to a seen entity.
    for (size_t e = benchmark; e < entities_.size(); ++e) {
      for (size_t attempt = 0; attempt < 500; ++attempt) {
        const size_t p = PickPredicate(false);
        const auto &spec = predicates_[p];
        const Type t = entities_[e].type;
        if (std::find(spec.domain.begin(), spec.domain.end(), t) ==
            spec.domain.end()) {
          continue;
        }
        const auto objects = Candidates(spec.range, {Pool::kSeen});
        if (objects.empty()) continue;
        if (TryAdd(e, p, Pick(rng_, objects), Partition::kTrain)) {
          facts_.back().partition = Partition::kTrain;
          kg_only_.insert(facts_.size() - 1);
          break;
        }
      }
    }
  }

  std::string Mention(const Entity &e) {
    if (!e.aliases.empty() && rng_.Bernoulli(config_.alias_mention_prob)) {
      return Pick(rng_, e.aliases);
    }
    return e.label;
  }

  std::string NounPhrase(const Entity &e, const std::string &mention) {
    if (!rng_.Bernoulli(config_.type_phrase_prob)) return mention;
    if (e.phrase.starts_with("the ")) return e.phrase + " " + mention;
    return "the " + e.phrase + " " + mention;
  }

  ToyWorld Emit() {
    static const std::vector<std::string> openers = {
        "", "", "Reportedly, ", "In 1998, ", "According to records, ",
        "As noted earlier, "};
    ToyWorld world;
    for (const Entity &e : entities_) {
      world.entries.push_back(
          {e.id, EntryKind::kEntity, e.label, e.description, e.aliases});
    }
    for (size_t p = 0; p < predicates_.size(); ++p) {
      const auto &spec = predicates_[p];
      const std::string id = "P" + std::to_string(10 + p);
      world.entries.push_back(
          {id, EntryKind::kPredicate, spec.label, spec.description, {}});
      if (spec.held_out) world.held_out_predicates.push_back(id);
    }
    auto pid = [](size_t p) { return "P" + std::to_string(10 + p); };

    size_t sentence = 0;
    for (size_t i = 0; i < facts_.size(); ++i) {
      const Fact &f = facts_[i];
      const KgFact fact{entities_[f.subject].id, pid(f.predicate),
                        entities_[f.object].id};
      world.facts.push_back(fact);
      if (kg_only_.contains(i)) continue;
      const size_t max = f.partition == Partition::kTrain
                             ? config_.max_sentences_per_train_fact
                             : config_.max_sentences_per_test_fact;
      const size_t n = 1 + rng_.Uniform(std::max<size_t>(max, 1));
      for (size_t k = 0; k < n; ++k) {
        const Entity &s = entities_[f.subject];
        const Entity &o = entities_[f.object];
        const std::string ms = Mention(s);
        const std::string mo = Mention(o);
        const std::string rel = Pick(
            rng_, std::vector<std::string>(
                      predicates_[f.predicate].paraphrases.begin(),
                      predicates_[f.predicate].paraphrases.end()));
        const std::string subject_np = NounPhrase(s, ms);
        const std::string text = Pick(rng_, openers) +
                                 (rng_.Bernoulli(0.5) ? subject_np
                                                      : Capitalize(subject_np)) +
                                 " " + rel + " " + NounPhrase(o, mo) + ".";
        const std::string sid = "s" + std::to_string(100000 + sentence++);

        SentenceFactPair pair;
        pair.sentence_id = sid;
        pair.sentence = Capitalize(text);
        pair.fact = fact;
        if (ms != s.label) pair.subject_mention = ms;
        if (mo != o.label) pair.object_mention = mo;
        pair.partition = f.partition;
        world.pairs.push_back(std::move(pair));

        OieTriple triple{ms, rel, mo, std::nullopt, std::string("toy")};
        world.oies.push_back({sid, triple});
        if (rng_.Bernoulli(config_.noise_oie_prob)) {
          OieTriple noise = rng_.Bernoulli(0.5)
                                ? OieTriple{ms, "is", "a " + s.phrase,
                                            std::nullopt, std::string("toy")}
                                : OieTriple{subject_np, rel, mo, std::nullopt,
                                            std::string("toy")};
          if (noise.subject != ms || noise.object != mo) {
            world.oies.push_back({sid, noise});
          }
        }
      }
    }
    return world;
  }

  ToyWorldConfig config_;
  Rng rng_;
  NameMaker names_;
  std::vector<PredicateSpec> predicates_;
  std::vector<Entity> entities_;
  std::vector<Fact> facts_;
  std::set<std::tuple<size_t, size_t, size_t>> used_;
  std::set<size_t> kg_only_;
};

}  // namespace

ToyWorld GenerateToyWorld(const ToyWorldConfig &config) {
  return WorldBuilder(config).Build();
}

void WriteToyWorld(const ToyWorld &world, const std::filesystem::path &dir,
                   const ArtifactHeader &header) {
  auto write = [&](const std::string &name, auto &&emit) {
    std::ofstream out = OpenForWrite(dir / name);
    out << DumpRecord(HeaderRecord(header)) << '\n';
    emit(out);
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + name);
  };
  write("kg_entries.jsonl", [&](std::ostream &out) {
    for (const KgEntry &e : world.entries) {
      out << DumpRecord(EntryToJson(e)) << '\n';
    }
  });
  write("kg_facts.jsonl", [&](std::ostream &out) {
    for (const KgFact &f : world.facts) out << DumpRecord(FactToJson(f)) << '\n';
  });
  write("pairs.jsonl", [&](std::ostream &out) {
    for (const SentenceFactPair &p : world.pairs) {
      out << DumpRecord(PairToJson(p)) << '\n';
    }
  });
  write("oies.jsonl", [&](std::ostream &out) {
    for (const SentenceOie &o : world.oies) {
      out << DumpRecord(OieToJson(o)) << '\n';
    }
  });
}

}  // namespace factlink
