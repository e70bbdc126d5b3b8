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

#include "factlink/reranker.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "factlink/status.h"

namespace factlink {

std::vector<CandidateFact> EnumerateCandidates(const SlotLinkResult &result) {
  const auto &subjects = result[Slot::kSubject];
  const auto &relations = result[Slot::kRelation];
  const auto &objects = result[Slot::kObject];
  std::vector<CandidateFact> out;
  out.reserve(subjects.size() * relations.size() * objects.size());
  for (size_t i = 0; i < subjects.size(); ++i) {
    for (size_t j = 0; j < relations.size(); ++j) {
      for (size_t k = 0; k < objects.size(); ++k) {
        out.push_back({{subjects[i].id, relations[j].id, objects[k].id},
                       {i, j, k}});
      }
    }
  }
  return out;
}

size_t CrossFeatureWidth(size_t dim) { return 3 * (dim + 3); }

std::vector<float> CrossFeatures(
    const SlotEmbeddings &slots,
    const std::array<std::span<const float>, 3> &entries) {
  const size_t d = slots[Slot::kSubject].dim();
  std::vector<float> out;
  out.reserve(CrossFeatureWidth(d));
  for (Slot s : kAllSlots) {
    const auto &a = slots[s].values;
    const auto &b = entries[static_cast<size_t>(s)];
    if (a.size() != d || b.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "cross feature inputs");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < d; ++i) {
      out.push_back(a[i] * b[i]);
      dot += static_cast<double>(a[i]) * b[i];
      na += static_cast<double>(a[i]) * a[i];
      nb += static_cast<double>(b[i]) * b[i];
    }
    const double denom = std::sqrt(na) * std::sqrt(nb);
    const double cosine = denom > 0.0 ? dot / denom : 0.0;
    out.push_back(static_cast<float>(cosine));
    out.push_back(static_cast<float>(cosine * cosine));
    out.push_back(1.0f);
  }
  return out;
}

CrossScorerParams CrossScorerParams::Zero(size_t dim, uint64_t seed) {
  CrossScorerParams p;
  p.dim = dim;
  p.seed = seed;
  p.weights.assign(CrossFeatureWidth(dim), 0.0f);
  return p;
}

double CrossScorerParams::Logit(std::span<const float> features) const {
  if (features.size() != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature width " + std::to_string(features.size()) +
                    " vs weights " + std::to_string(weights.size()));
  }
  double z = bias;
  for (size_t i = 0; i < weights.size(); ++i) {
    z += static_cast<double>(weights[i]) * features[i];
  }
  return z;
}

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double CrossScorerParams::Score(std::span<const float> features) const {
  return Sigmoid(Logit(features));
}

void CrossScorerParams::Validate() const {
  if (weights.size() != CrossFeatureWidth(dim)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cross scorer expects " + std::to_string(CrossFeatureWidth(dim)) +
                    " weights, has " + std::to_string(weights.size()));
  }
  if (!std::isfinite(bias)) {
    throw Error(ErrorCode::kNumericFailure, "non-finite scorer bias");
  }
  for (float w : weights) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kNumericFailure, "non-finite scorer weight");
    }
  }
}

void CrossScorerParams::Save(std::ostream &out,
                             const ArtifactHeader &header) const {
  out << DumpRecord(HeaderRecord(header)) << '\n';
  out << DumpRecord(Json{{"dim", dim}, {"seed", seed}, {"bias", bias}}) << '\n';
  Json w = Json::array();
  for (float v : weights) w.push_back(v);
  out << DumpRecord(Json{{"weights", w}}) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing scorer params");
}

CrossScorerParams CrossScorerParams::Load(std::istream &in) {
  CrossScorerParams p;
  bool have_shape = false, have_weights = false;
  ForEachRecord(in, "scorer", [&](size_t line, const Json &rec) {
    try {
      if (rec.contains("weights")) {
        for (const Json &v : rec.at("weights")) {
          p.weights.push_back(v.get<float>());
        }
        have_weights = true;
      } else {
        p.dim = rec.at("dim").get<size_t>();
        p.seed = rec.at("seed").get<uint64_t>();
        p.bias = rec.at("bias").get<double>();
        have_shape = true;
      }
    } catch (const Json::exception &e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "scorer:" + std::to_string(line) + ": " + e.what());
    }
  });
  if (!have_shape || !have_weights) {
    throw Error(ErrorCode::kMalformedRecord, "incomplete scorer params");
  }
  p.Validate();
  return p;
}

void CrossScorerParams::SaveFile(const std::filesystem::path &path,
                                 const ArtifactHeader &header) const {
  std::ofstream out = OpenForWrite(path);
  Save(out, header);
}

CrossScorerParams CrossScorerParams::LoadFile(
    const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  return Load(in);
}

namespace {

std::span<const float> EntryRow(const KgIndices &entries, Slot slot,
                                const std::string &id) {
  const EmbeddingIndex &index = entries.of(SlotKind(slot));
  const auto row = index.RowOf(id);
  if (!row) throw Error(ErrorCode::kUnknownId, id);
  return index.row(*row);
}

std::vector<float> FactFeatures(const SlotEmbeddings &slots,
                                const KgFact &fact, const KgIndices &entries) {
  return CrossFeatures(
      slots, {EntryRow(entries, Slot::kSubject, fact.subject),
              EntryRow(entries, Slot::kRelation, fact.predicate),
              EntryRow(entries, Slot::kObject, fact.object)});
}

}  // namespace

double ScoreFact(const CrossScorerParams &params, const SlotEmbeddings &slots,
                 const KgFact &fact, const KgIndices &entries) {
  return params.Score(FactFeatures(slots, fact, entries));
}

double ScoreFact(const CrossScorerParams &params,
                 const EncoderContract &encoder, const KgStore &store,
                 const OieTriple &triple, const KgFact &fact,
                 bool mask_description, bool with_context) {
  const SlotEmbeddings slots = encoder.EmbedSlots(triple, with_context);
  std::array<Embedding, 3> e;
  for (Slot s : kAllSlots) {
    e[static_cast<size_t>(s)] =
        encoder.EmbedEntry(store.Get(FactSlot(fact, s)), mask_description);
  }
  return params.Score(CrossFeatures(
      slots, {std::span<const float>(e[0].values),
              std::span<const float>(e[1].values),
              std::span<const float>(e[2].values)}));
}

size_t ArgmaxFirst(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyEvaluation, "no scores");
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

RerankResult Rerank(const CrossScorerParams &params,
                    const SlotEmbeddings &slots,
                    std::span<const CandidateFact> candidates,
                    const KgIndices &entries) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no candidates to rerank");
  }
  RerankResult result;
  result.scores.reserve(candidates.size());
  for (const CandidateFact &c : candidates) {
    result.scores.push_back(ScoreFact(params, slots, c.fact, entries));
  }
  result.best = candidates[ArgmaxFirst(result.scores)];
  return result;
}

NeighborLists BuildNeighborLists(const KgIndices &indices, size_t k) {
  NeighborLists lists;
  for (const EmbeddingIndex *index : {&indices.entities, &indices.predicates}) {
    Embedding query;
    for (size_t i = 0; i < index->size(); ++i) {
      const auto row = index->row(i);
      query.values.assign(row.begin(), row.end());
      const std::unordered_set<size_t> self{i};
      std::vector<std::string> ids;
      for (ScoredId &s : TopK(*index, query, k, &self)) {
        ids.push_back(std::move(s.id));
      }
      lists.emplace(index->ids()[i], std::move(ids));
    }
  }
  return lists;
}

void SaveNeighborLists(const NeighborLists &lists, std::ostream &out,
                       const ArtifactHeader &header) {
  std::vector<const std::string *> keys;
  for (const auto &[id, _] : lists) keys.push_back(&id);
  std::sort(keys.begin(), keys.end(),
            [](const std::string *a, const std::string *b) { return *a < *b; });
  out << DumpRecord(HeaderRecord(header)) << '\n';
  for (const std::string *id : keys) {
    out << DumpRecord(Json{{"id", *id}, {"neighbors", lists.at(*id)}}) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing neighbor lists");
}

NeighborLists LoadNeighborLists(std::istream &in) {
  NeighborLists lists;
  ForEachRecord(in, "neighbors", [&](size_t line, const Json &rec) {
    RecordReader reader(rec, "neighbors", line);
    std::string id = reader.RequireString("id");
    if (!lists.emplace(id, reader.StringList("neighbors")).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "neighbors:" + std::to_string(line) + ": " + id);
    }
  });
  return lists;
}

KgFact SampleHardNegative(const KgFact &fact, const NeighborLists &neighbors,
                          Rng &rng) {
  std::array<std::vector<const std::string *>, 3> options;
  std::vector<Slot> eligible;
  for (Slot s : kAllSlots) {
    const std::string &gold = FactSlot(fact, s);
    auto it = neighbors.find(gold);
    if (it == neighbors.end()) continue;
    auto &opts = options[static_cast<size_t>(s)];
    for (const std::string &n : it->second) {
      if (n != gold) opts.push_back(&n);
    }
    if (!opts.empty()) eligible.push_back(s);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no neighbors to corrupt fact " + fact.subject + " " +
                    fact.predicate + " " + fact.object);
  }
  const Slot slot = eligible[rng.Uniform(eligible.size())];
  const auto &opts = options[static_cast<size_t>(slot)];
  KgFact corrupted = fact;
  FactSlot(corrupted, slot) = *opts[rng.Uniform(opts.size())];
  return corrupted;
}

BceGradient BceWithGradient(const CrossScorerParams &params,
                            std::span<const float> features, double label) {
  const double z = params.Logit(features);
  BceGradient g;
  g.loss = Softplus(z) - label * z;
  const double residual = Sigmoid(z) - label;
  g.d_weights.resize(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    g.d_weights[i] = residual * features[i];
  }
  g.d_bias = residual;
  return g;
}

RerankTrainResult TrainReranker(std::span<const Alignment> alignments,
                                const EncoderContract &encoder,
                                const KgStore &store,
                                const RerankTrainConfig &config,
                                const NeighborLists *neighbors) {
  if (alignments.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training alignments");
  }
  const KgIndices plain = BuildKgIndices(encoder, store, false);
  const KgIndices masked = BuildKgIndices(encoder, store, true);
  NeighborLists built;
  if (neighbors == nullptr && config.negatives_per_positive > 0) {
    built = BuildNeighborLists(plain, config.hard_negative_pool);
    neighbors = &built;
  }

  std::vector<SlotEmbeddings> slots;
  slots.reserve(alignments.size());
  for (const Alignment &a : alignments) {
    slots.push_back(encoder.EmbedSlots(a.oie, config.with_context));
  }

  Rng order_rng(StreamSeed(config.seed, "rerank-order"));
  Rng mask_rng(StreamSeed(config.seed, "rerank-mask"));
  Rng negative_rng(StreamSeed(config.seed, "rerank-negatives"));

  RerankTrainResult result;
  result.params = CrossScorerParams::Zero(encoder.dim(), config.seed);
  CrossScorerParams &p = result.params;
  const double lr = config.learning_rate;
  const double wd = config.weight_decay;
  auto step = [&](const std::vector<float> &x, double label) {
    const BceGradient g = BceWithGradient(p, x, label);
    for (size_t i = 0; i < p.weights.size(); ++i) {
      p.weights[i] -= static_cast<float>(lr * (g.d_weights[i] + wd * p.weights[i]));
    }
    p.bias -= lr * g.d_bias;
    return g.loss;
  };

  std::vector<size_t> order(alignments.size());
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.Shuffle(order);
    double loss_sum = 0.0;
    size_t pairs = 0;
    for (size_t i : order) {
      const bool mask = mask_rng.Bernoulli(config.description_mask_prob);
      const KgIndices &entries = mask ? masked : plain;
      loss_sum += step(FactFeatures(slots[i], alignments[i].fact, entries), 1.0);
      ++pairs;
      for (size_t n = 0; n < config.negatives_per_positive; ++n) {
        const KgFact negative =
            SampleHardNegative(alignments[i].fact, *neighbors, negative_rng);
        loss_sum += step(FactFeatures(slots[i], negative, entries), 0.0);
        ++pairs;
      }
    }
    const double mean = loss_sum / static_cast<double>(pairs);
    if (!std::isfinite(mean)) {
      throw Error(ErrorCode::kNumericFailure,
                  "non-finite reranker loss in epoch " + std::to_string(epoch));
    }
    result.trace.push_back({epoch, mean});
  }
  p.Validate();
  return result;
}

}  // namespace factlink
