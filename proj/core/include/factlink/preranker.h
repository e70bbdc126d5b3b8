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

// Per-slot dense retrieval against KG entry embeddings, and contrastive
// training of the reference encoder.

#ifndef FACTLINK_PRERANKER_H_
#define FACTLINK_PRERANKER_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/encoder.h"
#include "factlink/kg_store.h"
#include "factlink/random.h"

namespace factlink {

struct ScoredId {
  std::string id;
  double score = 0.0;

  bool operator==(const ScoredId &) const = default;
};

// Row-unit-norm matrix of entry embeddings of one kind.
class EmbeddingIndex {
 public:
  EmbeddingIndex() = default;

  // Rows are renormalized and kept in input order. Throws DuplicateId and
  // DimensionMismatch.
  static EmbeddingIndex Build(EntryKind kind, std::vector<std::string> ids,
                              std::span<const Embedding> embeddings);

  EntryKind kind() const { return kind_; }
  size_t size() const { return ids_.size(); }
  size_t dim() const { return dim_; }
  const std::vector<std::string> &ids() const { return ids_; }
  std::span<const float> row(size_t i) const {
    return {matrix_.data() + i * dim_, dim_};
  }
  std::optional<size_t> RowOf(std::string_view id) const;

  // "FLIX" | version u32 | kind u8 | count u64 | dim u32 | ids as
  // (u32 length, UTF-8 bytes) | row-major little-endian f32 matrix.
  void Save(std::ostream &out) const;
  static EmbeddingIndex Load(std::istream &in);
  void SaveFile(const std::filesystem::path &path) const;
  static EmbeddingIndex LoadFile(const std::filesystem::path &path);

 private:
  EntryKind kind_ = EntryKind::kEntity;
  size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> matrix_;
  std::unordered_map<std::string, size_t> by_id_;
};

// Exact top-k by dot product, ties broken by ascending id. Rows listed in
// `excluded` are skipped. Returns min(k, eligible rows) items.
std::vector<ScoredId> TopK(const EmbeddingIndex &index, const Embedding &query,
                           size_t k,
                           const std::unordered_set<size_t> *excluded = nullptr);

struct KgIndices {
  EmbeddingIndex entities;
  EmbeddingIndex predicates;

  const EmbeddingIndex &of(EntryKind kind) const {
    return kind == EntryKind::kEntity ? entities : predicates;
  }
};

KgIndices BuildKgIndices(const EncoderContract &encoder, const KgStore &store,
                         bool mask_description = false);

struct SlotLinkResult {
  std::array<std::vector<ScoredId>, 3> slots;

  const std::vector<ScoredId> &operator[](Slot s) const {
    return slots[static_cast<size_t>(s)];
  }
  // Top-1 of each slot. Throws EmptyEvaluation if a list is empty.
  KgFact LinkedFact() const;
};

SlotLinkResult Link(const EncoderContract &encoder, const KgIndices &indices,
                    const OieTriple &triple, size_t k, bool with_context);
SlotLinkResult LinkEmbeddings(const SlotEmbeddings &slots,
                              const KgIndices &indices, size_t k);

// -log(exp(p/t) / (exp(p/t) + sum_n exp(n_i/t))), in log-sum-exp form.
double InfoNceLoss(double positive, std::span<const double> negatives,
                   double temperature);

struct InfoNceGradient {
  double loss = 0.0;
  double d_positive = 0.0;
  std::vector<double> d_negatives;
  double d_temperature = 0.0;
};
InfoNceGradient InfoNceWithGradient(double positive,
                                    std::span<const double> negatives,
                                    double temperature);

// Uniform draws from a fixed id list, never returning the excluded id.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::vector<std::string> ids);

  // Throws InvalidArgument when no other id exists.
  const std::string &Sample(Rng &rng, std::string_view exclude = {}) const;
  size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, size_t> position_;
};

struct PrerankTrainConfig {
  size_t epochs = 10;
  double learning_rate = 5e-5;
  double weight_decay = 1e-3;
  size_t batch_size = 32;
  double temperature_init = 0.07;
  double min_temperature = 0.01;
  size_t global_neg_entities = 128;
  size_t global_neg_predicates = 64;
  bool with_context = false;
  uint64_t seed = 0;
  // Recorded for forward compatibility; only "sgd" is implemented.
  std::string optimizer = "sgd";
};

struct EpochTrace {
  size_t epoch = 0;
  double mean_loss = 0.0;
  double temperature = 0.0;
};

Json TraceToJson(const EpochTrace &trace);

struct PrerankTrainResult {
  ReferenceEncoderParams params;
  std::vector<EpochTrace> trace;
};

// Gradient of the batch objective w.r.t. the reference encoder parameters.
// Table gradients are sparse: one row per touched bucket.
struct EncoderGradient {
  std::vector<float> slot_projection;
  std::vector<float> entry_projection;
  std::unordered_map<uint32_t, std::vector<float>> table_rows;
  double log_temperature = 0.0;
};

// Trains with temperature-scaled InfoNCE over in-batch negatives plus
// globally sampled entities/predicates (drawn once per batch), plain SGD
// with decoupled weight decay, and a learnable log temperature.
class PrerankTrainer {
 public:
  PrerankTrainer(std::span<const Alignment> alignments, const KgStore &store,
                 const PrerankTrainConfig &config,
                 ReferenceEncoderParams initial);

  PrerankTrainResult Train();

  // One batch: `examples` index the alignments, `pool` holds globally
  // sampled entry ids. Returns the mean loss and fills `gradient`.
  double BatchObjective(std::span<const size_t> examples,
                        std::span<const std::string> pool,
                        EncoderGradient *gradient) const;

  const ReferenceEncoderParams &params() const { return params_; }
  ReferenceEncoderParams &mutable_params() { return params_; }

 private:
  struct Example {
    TripleFeatures features;
    std::array<size_t, 3> positives;  // entry indices into the store
  };

  void Apply(const EncoderGradient &gradient);

  const KgStore &store_;
  PrerankTrainConfig config_;
  ReferenceEncoderParams params_;
  std::vector<Example> examples_;
  std::vector<EntryFeatures> entry_features_;
  std::unordered_map<std::string, size_t> entry_index_;
};

PrerankTrainResult TrainPreranker(std::span<const Alignment> alignments,
                                  const KgStore &store,
                                  const PrerankTrainConfig &config,
                                  const EncoderConfig &encoder_config);

}  // namespace factlink

#endif  // FACTLINK_PRERANKER_H_
