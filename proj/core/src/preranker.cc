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

#include "factlink/preranker.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>

#include "factlink/status.h"

namespace factlink {

namespace {

constexpr char kIndexMagic[4] = {'F', 'L', 'I', 'X'};
constexpr uint32_t kIndexVersion = 1;

template <typename T>
void WritePod(std::ostream &out, const T &value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream &in) {
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) throw Error(ErrorCode::kMalformedRecord, "truncated index");
  return value;
}

}  // namespace

EmbeddingIndex EmbeddingIndex::Build(EntryKind kind,
                                     std::vector<std::string> ids,
                                     std::span<const Embedding> embeddings) {
  if (ids.size() != embeddings.size()) {
    throw Error(ErrorCode::kInvalidArgument, "ids and embeddings differ in size");
  }
  EmbeddingIndex index;
  index.kind_ = kind;
  index.dim_ = embeddings.empty() ? 0 : embeddings.front().dim();
  index.matrix_.reserve(ids.size() * index.dim_);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (embeddings[i].dim() != index.dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding for '" + ids[i] + "' has dim " +
                      std::to_string(embeddings[i].dim()));
    }
    if (!index.by_id_.emplace(ids[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, ids[i]);
    }
    const Embedding unit = Normalized(embeddings[i].values);
    index.matrix_.insert(index.matrix_.end(), unit.values.begin(),
                         unit.values.end());
  }
  index.ids_ = std::move(ids);
  return index;
}

std::optional<size_t> EmbeddingIndex::RowOf(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingIndex::Save(std::ostream &out) const {
  out.write(kIndexMagic, sizeof(kIndexMagic));
  WritePod(out, kIndexVersion);
  WritePod(out, static_cast<uint8_t>(kind_ == EntryKind::kEntity ? 0 : 1));
  WritePod(out, static_cast<uint64_t>(ids_.size()));
  WritePod(out, static_cast<uint32_t>(dim_));
  for (const std::string &id : ids_) {
    WritePod(out, static_cast<uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  out.write(reinterpret_cast<const char *>(matrix_.data()),
            static_cast<std::streamsize>(matrix_.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::kIo, "failed writing index");
}

EmbeddingIndex EmbeddingIndex::Load(std::istream &in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kMalformedRecord, "not an embedding index");
  }
  const auto version = ReadPod<uint32_t>(in);
  if (version != kIndexVersion) {
    throw Error(ErrorCode::kMalformedRecord,
                "unsupported index version " + std::to_string(version));
  }
  const auto kind = ReadPod<uint8_t>(in);
  if (kind > 1) throw Error(ErrorCode::kMalformedRecord, "bad index kind");
  const auto count = ReadPod<uint64_t>(in);
  const auto dim = ReadPod<uint32_t>(in);

  EmbeddingIndex index;
  index.kind_ = kind == 0 ? EntryKind::kEntity : EntryKind::kPredicate;
  index.dim_ = dim;
  index.ids_.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    const auto len = ReadPod<uint32_t>(in);
    std::string id(len, '\0');
    in.read(id.data(), len);
    if (!in) throw Error(ErrorCode::kMalformedRecord, "truncated index ids");
    if (!index.by_id_.emplace(id, i).second) {
      throw Error(ErrorCode::kDuplicateId, id);
    }
    index.ids_.push_back(std::move(id));
  }
  index.matrix_.resize(count * dim);
  in.read(reinterpret_cast<char *>(index.matrix_.data()),
          static_cast<std::streamsize>(index.matrix_.size() * sizeof(float)));
  if (!in) throw Error(ErrorCode::kMalformedRecord, "truncated index matrix");
  return index;
}

void EmbeddingIndex::SaveFile(const std::filesystem::path &path) const {
  std::ofstream out = OpenForWrite(path);
  Save(out);
}

EmbeddingIndex EmbeddingIndex::LoadFile(const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  return Load(in);
}

std::vector<ScoredId> TopK(const EmbeddingIndex &index, const Embedding &query,
                           size_t k, const std::unordered_set<size_t> *excluded) {
  if (k == 0 || index.size() == 0) return {};
  if (query.dim() != index.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dim " + std::to_string(query.dim()) + " vs index dim " +
                    std::to_string(index.dim()));
  }
  const auto &ids = index.ids();
  using Item = std::pair<double, size_t>;
  // True when a ranks before b.
  auto better = [&](const Item &a, const Item &b) {
    if (a.first != b.first) return a.first > b.first;
    return ids[a.second] < ids[b.second];
  };
  // Max-heap on "worse", so the top is the weakest kept item.
  std::priority_queue<Item, std::vector<Item>, decltype(better)> heap(better);
  const float *q = query.values.data();
  for (size_t i = 0; i < index.size(); ++i) {
    if (excluded != nullptr && excluded->contains(i)) continue;
    const auto row = index.row(i);
    double score = 0.0;
    for (size_t j = 0; j < row.size(); ++j) {
      score += static_cast<double>(row[j]) * static_cast<double>(q[j]);
    }
    Item item{score, i};
    if (heap.size() < k) {
      heap.push(item);
    } else if (better(item, heap.top())) {
      heap.pop();
      heap.push(item);
    }
  }
  std::vector<ScoredId> out(heap.size());
  for (size_t i = out.size(); i-- > 0;) {
    out[i] = {ids[heap.top().second], heap.top().first};
    heap.pop();
  }
  return out;
}

KgIndices BuildKgIndices(const EncoderContract &encoder, const KgStore &store,
                         bool mask_description) {
  KgIndices indices;
  for (EntryKind kind : {EntryKind::kEntity, EntryKind::kPredicate}) {
    const auto &ids = store.ids_of(kind);
    std::vector<Embedding> embeddings;
    embeddings.reserve(ids.size());
    for (const std::string &id : ids) {
      embeddings.push_back(encoder.EmbedEntry(store.Get(id), mask_description));
    }
    EmbeddingIndex index = EmbeddingIndex::Build(kind, ids, embeddings);
    if (kind == EntryKind::kEntity) {
      indices.entities = std::move(index);
    } else {
      indices.predicates = std::move(index);
    }
  }
  return indices;
}

KgFact SlotLinkResult::LinkedFact() const {
  KgFact fact;
  for (Slot s : kAllSlots) {
    const auto &list = (*this)[s];
    if (list.empty()) {
      throw Error(ErrorCode::kEmptyEvaluation,
                  "no candidates for slot " + std::string(SlotName(s)));
    }
    FactSlot(fact, s) = list.front().id;
  }
  return fact;
}

SlotLinkResult LinkEmbeddings(const SlotEmbeddings &slots,
                              const KgIndices &indices, size_t k) {
  SlotLinkResult result;
  for (Slot s : kAllSlots) {
    result.slots[static_cast<size_t>(s)] =
        TopK(indices.of(SlotKind(s)), slots[s], k);
  }
  return result;
}

SlotLinkResult Link(const EncoderContract &encoder, const KgIndices &indices,
                    const OieTriple &triple, size_t k, bool with_context) {
  return LinkEmbeddings(encoder.EmbedSlots(triple, with_context), indices, k);
}

InfoNceGradient InfoNceWithGradient(double positive,
                                    std::span<const double> negatives,
                                    double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kNumericFailure, "temperature must be positive");
  }
  const double inv = 1.0 / temperature;
  double max_logit = positive * inv;
  for (double n : negatives) max_logit = std::max(max_logit, n * inv);

  double denom = std::exp(positive * inv - max_logit);
  std::vector<double> weights(negatives.size());
  for (size_t i = 0; i < negatives.size(); ++i) {
    weights[i] = std::exp(negatives[i] * inv - max_logit);
    denom += weights[i];
  }
  const double log_denom = max_logit + std::log(denom);

  InfoNceGradient g;
  g.loss = log_denom - positive * inv;
  const double p0 = std::exp(positive * inv - log_denom);
  g.d_positive = (p0 - 1.0) * inv;
  g.d_negatives.resize(negatives.size());
  double expected = p0 * positive;
  for (size_t i = 0; i < negatives.size(); ++i) {
    const double p = weights[i] / denom;
    g.d_negatives[i] = p * inv;
    expected += p * negatives[i];
  }
  g.d_temperature = (positive - expected) * inv * inv;
  if (!std::isfinite(g.loss)) {
    throw Error(ErrorCode::kNumericFailure, "non-finite contrastive loss");
  }
  return g;
}

double InfoNceLoss(double positive, std::span<const double> negatives,
                   double temperature) {
  return InfoNceWithGradient(positive, negatives, temperature).loss;
}

NegativeSampler::NegativeSampler(std::vector<std::string> ids)
    : ids_(std::move(ids)) {
  for (size_t i = 0; i < ids_.size(); ++i) position_.emplace(ids_[i], i);
}

const std::string &NegativeSampler::Sample(Rng &rng,
                                           std::string_view exclude) const {
  auto it = exclude.empty() ? position_.end()
                            : position_.find(std::string(exclude));
  if (it == position_.end()) {
    if (ids_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty negative pool");
    }
    return ids_[rng.Uniform(ids_.size())];
  }
  if (ids_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "no negative other than '" + std::string(exclude) + "'");
  }
  size_t i = rng.Uniform(ids_.size() - 1);
  if (i >= it->second) ++i;
  return ids_[i];
}

Json TraceToJson(const EpochTrace &trace) {
  return Json{{"epoch", trace.epoch},
              {"mean_loss", trace.mean_loss},
              {"tau", trace.temperature}};
}

PrerankTrainer::PrerankTrainer(std::span<const Alignment> alignments,
                               const KgStore &store,
                               const PrerankTrainConfig &config,
                               ReferenceEncoderParams initial)
    : store_(store), config_(config), params_(std::move(initial)) {
  if (alignments.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training alignments");
  }
  if (config_.batch_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be positive");
  }
  if (config_.optimizer != "sgd") {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported optimizer '" + config_.optimizer + "'");
  }
  params_.Validate();
  const uint32_t buckets = params_.config.buckets;

  const auto &entries = store_.entries();
  entry_features_.reserve(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    entry_index_.emplace(entries[i].id, i);
    entry_features_.push_back(ExtractEntryFeatures(entries[i], false, buckets));
  }
  examples_.reserve(alignments.size());
  for (const Alignment &a : alignments) {
    Example ex;
    ex.features = ExtractTripleFeatures(a.oie, config_.with_context, buckets);
    for (Slot s : kAllSlots) {
      const std::string &id = FactSlot(a.fact, s);
      auto it = entry_index_.find(id);
      if (it == entry_index_.end()) {
        throw Error(ErrorCode::kUnknownId, "training fact references " + id);
      }
      ex.positives[static_cast<size_t>(s)] = it->second;
    }
    examples_.push_back(std::move(ex));
  }
}

namespace {

// Adds `scale * g` to every table row in `features`.
void AccumulateRows(std::span<const uint32_t> features,
                    std::span<const double> g, size_t h,
                    std::unordered_map<uint32_t, std::vector<float>> &rows) {
  if (features.empty()) return;
  const double scale = 1.0 / static_cast<double>(features.size());
  for (uint32_t f : features) {
    auto &row = rows[f];
    if (row.empty()) row.assign(h, 0.0f);
    for (size_t j = 0; j < h; ++j) {
      row[j] += static_cast<float>(g[j] * scale);
    }
  }
}

struct Activation {
  std::vector<float> input;  // [segment or label; triple or description]
  std::vector<float> unit;   // normalized output
  double norm = 0.0;
};

Activation Forward(const ReferenceEncoderParams &params,
                   std::span<const float> projection,
                   std::span<const uint32_t> first,
                   std::span<const uint32_t> second,
                   const std::vector<float> *second_mean) {
  const size_t h = params.config.hidden;
  const size_t d = params.config.dim;
  Activation act;
  act.input.assign(2 * h, 0.0f);
  MeanFeatureRows(params, first, std::span<float>(act.input).first(h));
  if (second_mean != nullptr) {
    std::copy(second_mean->begin(), second_mean->end(), act.input.begin() + h);
  } else {
    MeanFeatureRows(params, second, std::span<float>(act.input).subspan(h));
  }
  act.unit.assign(d, 0.0f);
  Project(projection, 2 * h, act.input, act.unit);
  double sq = 0.0;
  for (float v : act.unit) sq += static_cast<double>(v) * v;
  act.norm = std::sqrt(sq);
  if (!(act.norm > 0.0) || !std::isfinite(act.norm)) {
    throw Error(ErrorCode::kNumericFailure, "degenerate encoder output");
  }
  for (float &v : act.unit) v = static_cast<float>(v / act.norm);
  return act;
}

// Backpropagates `g_unit` through normalization and the projection.
// Accumulates the projection gradient and returns d(loss)/d(input).
std::vector<double> Backward(const Activation &act,
                             std::span<const float> projection,
                             std::span<const double> g_unit,
                             std::vector<float> &g_projection) {
  const size_t d = act.unit.size();
  const size_t w = act.input.size();
  double radial = 0.0;
  for (size_t i = 0; i < d; ++i) radial += g_unit[i] * act.unit[i];
  std::vector<double> g_input(w, 0.0);
  for (size_t i = 0; i < d; ++i) {
    const double gu = (g_unit[i] - radial * act.unit[i]) / act.norm;
    if (gu == 0.0) continue;
    float *g_row = g_projection.data() + i * w;
    const float *p_row = projection.data() + i * w;
    for (size_t j = 0; j < w; ++j) {
      g_row[j] += static_cast<float>(gu * act.input[j]);
      g_input[j] += gu * p_row[j];
    }
  }
  return g_input;
}

double DotUnits(const std::vector<float> &a, const std::vector<float> &b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

}  // namespace

double PrerankTrainer::BatchObjective(std::span<const size_t> examples,
                                      std::span<const std::string> pool,
                                      EncoderGradient *gradient) const {
  const size_t h = params_.config.hidden;
  const size_t d = params_.config.dim;
  const size_t w = 2 * h;
  gradient->slot_projection.assign(d * w, 0.0f);
  gradient->entry_projection.assign(d * w, 0.0f);
  gradient->table_rows.clear();
  gradient->log_temperature = 0.0;
  if (examples.empty()) return 0.0;
  const double tau = std::exp(params_.log_temperature);

  // Entries taking part in this batch, with enough ownership bookkeeping to
  // tell which examples may use each one as a negative.
  struct Local {
    size_t entry = 0;
    size_t owners = 0;
    size_t first_owner = 0;
    size_t last_owner = 0;
    bool pooled = false;
  };
  std::vector<Local> locals;
  std::unordered_map<size_t, size_t> local_of;
  auto add = [&](size_t entry) -> Local & {
    auto [it, inserted] = local_of.emplace(entry, locals.size());
    if (inserted) locals.push_back({entry});
    return locals[it->second];
  };
  for (size_t b = 0; b < examples.size(); ++b) {
    for (size_t pos : examples_[examples[b]].positives) {
      Local &l = add(pos);
      if (l.owners == 0) {
        l.first_owner = b;
        l.last_owner = b;
        l.owners = 1;
      } else if (l.last_owner != b) {
        l.last_owner = b;
        ++l.owners;
      }
    }
  }
  for (const std::string &id : pool) {
    auto it = entry_index_.find(id);
    if (it == entry_index_.end()) throw Error(ErrorCode::kUnknownId, id);
    add(it->second).pooled = true;
  }

  const auto &entries = store_.entries();
  std::vector<Activation> entry_acts;
  entry_acts.reserve(locals.size());
  for (const Local &l : locals) {
    const EntryFeatures &f = entry_features_[l.entry];
    entry_acts.push_back(Forward(params_, params_.entry_projection, f.label,
                                 f.description, nullptr));
  }
  std::vector<std::vector<double>> g_entry(locals.size(),
                                           std::vector<double>(d, 0.0));

  const double scale = 1.0 / (3.0 * static_cast<double>(examples.size()));
  double loss = 0.0;
  std::vector<size_t> negatives;
  std::vector<double> neg_sims;
  std::vector<double> g_unit(d);
  for (size_t b = 0; b < examples.size(); ++b) {
    const Example &ex = examples_[examples[b]];
    std::vector<float> triple_mean(h);
    MeanFeatureRows(params_, ex.features.triple, triple_mean);
    std::vector<double> g_triple(h, 0.0);

    for (Slot s : kAllSlots) {
      const size_t si = static_cast<size_t>(s);
      const EntryKind kind = SlotKind(s);
      const Activation act =
          Forward(params_, params_.slot_projection, ex.features.segments[si],
                  {}, &triple_mean);
      const size_t pos_local = local_of.at(ex.positives[si]);

      negatives.clear();
      neg_sims.clear();
      for (size_t l = 0; l < locals.size(); ++l) {
        if (l == pos_local) continue;
        const Local &loc = locals[l];
        if (entries[loc.entry].kind != kind) continue;
        const bool usable =
            loc.pooled || loc.owners >= 2 || loc.first_owner != b;
        if (!usable) continue;
        negatives.push_back(l);
        neg_sims.push_back(DotUnits(act.unit, entry_acts[l].unit));
      }
      const double pos_sim = DotUnits(act.unit, entry_acts[pos_local].unit);
      const InfoNceGradient g = InfoNceWithGradient(pos_sim, neg_sims, tau);
      loss += g.loss;
      gradient->log_temperature += scale * g.d_temperature * tau;

      const double gp = scale * g.d_positive;
      for (size_t i = 0; i < d; ++i) {
        g_unit[i] = gp * entry_acts[pos_local].unit[i];
        g_entry[pos_local][i] += gp * act.unit[i];
      }
      for (size_t n = 0; n < negatives.size(); ++n) {
        const double gn = scale * g.d_negatives[n];
        const auto &other = entry_acts[negatives[n]].unit;
        auto &g_other = g_entry[negatives[n]];
        for (size_t i = 0; i < d; ++i) {
          g_unit[i] += gn * other[i];
          g_other[i] += gn * act.unit[i];
        }
      }
      const std::vector<double> g_input = Backward(
          act, params_.slot_projection, g_unit, gradient->slot_projection);
      AccumulateRows(ex.features.segments[si],
                     std::span<const double>(g_input).first(h), h,
                     gradient->table_rows);
      for (size_t j = 0; j < h; ++j) g_triple[j] += g_input[h + j];
    }
    AccumulateRows(ex.features.triple, g_triple, h, gradient->table_rows);
  }

  for (size_t l = 0; l < locals.size(); ++l) {
    const EntryFeatures &f = entry_features_[locals[l].entry];
    const std::vector<double> g_input =
        Backward(entry_acts[l], params_.entry_projection, g_entry[l],
                 gradient->entry_projection);
    AccumulateRows(f.label, std::span<const double>(g_input).first(h), h,
                   gradient->table_rows);
    AccumulateRows(f.description, std::span<const double>(g_input).subspan(h),
                   h, gradient->table_rows);
  }
  return loss * scale;
}

void PrerankTrainer::Apply(const EncoderGradient &gradient) {
  const float lr = static_cast<float>(config_.learning_rate);
  const float wd = static_cast<float>(config_.weight_decay);
  auto step = [&](std::vector<float> &param, const std::vector<float> &grad) {
    for (size_t i = 0; i < param.size(); ++i) {
      param[i] -= lr * (grad[i] + wd * param[i]);
    }
  };
  step(params_.slot_projection, gradient.slot_projection);
  step(params_.entry_projection, gradient.entry_projection);
  const size_t h = params_.config.hidden;
  // Decay on the table is applied to touched rows only.
  for (const auto &[row, grad] : gradient.table_rows) {
    float *p = params_.feature_table.data() + static_cast<size_t>(row) * h;
    for (size_t j = 0; j < h; ++j) p[j] -= lr * (grad[j] + wd * p[j]);
  }
  params_.log_temperature -= config_.learning_rate * gradient.log_temperature;
  params_.log_temperature =
      std::max(params_.log_temperature, std::log(config_.min_temperature));
}

PrerankTrainResult PrerankTrainer::Train() {
  Rng order_rng(StreamSeed(config_.seed, "prerank-order"));
  Rng negative_rng(StreamSeed(config_.seed, "prerank-negatives"));
  const NegativeSampler entities(store_.entity_ids());
  const NegativeSampler predicates(store_.predicate_ids());

  std::vector<size_t> order(examples_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  PrerankTrainResult result;
  EncoderGradient gradient;
  std::vector<std::string> pool;
  for (size_t epoch = 1; epoch <= config_.epochs; ++epoch) {
    order_rng.Shuffle(order);
    double loss_sum = 0.0;
    for (size_t start = 0; start < order.size(); start += config_.batch_size) {
      const size_t end = std::min(order.size(), start + config_.batch_size);
      pool.clear();
      if (entities.size() > 0) {
        for (size_t i = 0; i < config_.global_neg_entities; ++i) {
          pool.push_back(entities.Sample(negative_rng));
        }
      }
      if (predicates.size() > 0) {
        for (size_t i = 0; i < config_.global_neg_predicates; ++i) {
          pool.push_back(predicates.Sample(negative_rng));
        }
      }
      const std::span<const size_t> batch(order.data() + start, end - start);
      const double loss = BatchObjective(batch, pool, &gradient);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNumericFailure,
                    "non-finite loss in epoch " + std::to_string(epoch));
      }
      Apply(gradient);
      loss_sum += loss * static_cast<double>(batch.size());
    }
    result.trace.push_back({epoch,
                            loss_sum / static_cast<double>(order.size()),
                            std::exp(params_.log_temperature)});
  }
  params_.Validate();
  result.params = params_;
  return result;
}

PrerankTrainResult TrainPreranker(std::span<const Alignment> alignments,
                                  const KgStore &store,
                                  const PrerankTrainConfig &config,
                                  const EncoderConfig &encoder_config) {
  PrerankTrainer trainer(
      alignments, store, config,
      ReferenceEncoderParams::Initialize(encoder_config,
                                         config.temperature_init));
  return trainer.Train();
}

}  // namespace factlink
