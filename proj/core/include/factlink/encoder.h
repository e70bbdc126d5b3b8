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

// Encoders map OIE triples to three per-slot unit vectors and KG entries to
// one unit vector. Two implementations ship: a trainable reference encoder
// (hashed word and character-trigram features, a learned feature table and
// two linear projections) and a frozen encoder serving imported vectors.
//
// Reference encoder, per slot i of a triple t:
//   segment_i = mean of table rows over features(slot text)
//   triple    = mean of table rows over features(OieText(t))
//   slot_i    = normalize(slot_projection * [segment_i; triple])
// and per KG entry e:
//   label     = mean of table rows over features(label)
//   desc      = mean over features(description), or 0 if absent or masked
//   entry     = normalize(entry_projection * [label; desc])

#ifndef FACTLINK_ENCODER_H_
#define FACTLINK_ENCODER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/jsonl.h"
#include "factlink/kg_store.h"

namespace factlink {

struct Embedding {
  std::vector<float> values;

  size_t dim() const { return values.size(); }
  double Dot(const Embedding &other) const;
  double Norm() const;
};

// Returns `values` scaled to unit norm. Throws NumericFailure on a zero or
// non-finite vector.
Embedding Normalized(std::vector<float> values);

struct SlotEmbeddings {
  std::array<Embedding, 3> slots;

  const Embedding &operator[](Slot slot) const {
    return slots[static_cast<size_t>(slot)];
  }
  Embedding &operator[](Slot slot) { return slots[static_cast<size_t>(slot)]; }
};

class EncoderContract {
 public:
  virtual ~EncoderContract() = default;

  virtual size_t dim() const = 0;
  virtual SlotEmbeddings EmbedSlots(const OieTriple &triple,
                                    bool with_context) const = 0;
  virtual Embedding EmbedEntry(const KgEntry &entry,
                               bool mask_description) const = 0;
};

// Featurization. Reserved markers occupy buckets [0, kReservedBuckets);
// every other feature hashes into [kReservedBuckets, buckets).
inline constexpr uint32_t kReservedBuckets = 7;

// Human-readable feature keys before hashing: "w:<lowercased word>",
// "t:<trigram>" over "^word$", and "m:<marker>" for reserved markers.
// Lowercasing is ASCII-only; trigrams are over bytes.
std::vector<std::string> FeatureKeys(std::string_view text);
std::vector<uint32_t> Featurize(std::string_view text, uint32_t buckets);

struct EncoderConfig {
  size_t dim = 200;
  size_t hidden = 64;
  uint32_t buckets = 1u << 18;
  uint64_t seed = 0;
};

struct ReferenceEncoderParams {
  EncoderConfig config;
  // buckets x hidden, row-major.
  std::vector<float> feature_table;
  // dim x (2 * hidden), row-major: row i produces output coordinate i.
  std::vector<float> slot_projection;
  std::vector<float> entry_projection;
  // Pre-ranker contrastive temperature, stored in log space.
  double log_temperature = 0.0;

  // Table entries uniform in +-1/sqrt(h), projections in +-1/sqrt(2h).
  static ReferenceEncoderParams Initialize(const EncoderConfig &config,
                                           double temperature = 0.07);

  size_t input_width() const { return 2 * config.hidden; }
  // Throws InvalidArgument on inconsistent shapes, NumericFailure on
  // non-finite values.
  void Validate() const;

  // Binary format "FLEP": magic, version, a JSON header string, shapes, the
  // log temperature, then the three float matrices (little-endian).
  void Save(std::ostream &out, const ArtifactHeader &header = {}) const;
  static ReferenceEncoderParams Load(std::istream &in);
  void SaveFile(const std::filesystem::path &path,
                const ArtifactHeader &header = {}) const;
  static ReferenceEncoderParams LoadFile(const std::filesystem::path &path);
};

// Feature lists consumed by the reference encoder; precomputed by trainers.
struct TripleFeatures {
  std::array<std::vector<uint32_t>, 3> segments;
  std::vector<uint32_t> triple;
};
struct EntryFeatures {
  std::vector<uint32_t> label;
  std::vector<uint32_t> description;
};
TripleFeatures ExtractTripleFeatures(const OieTriple &triple,
                                     bool with_context, uint32_t buckets);
EntryFeatures ExtractEntryFeatures(const KgEntry &entry, bool mask_description,
                                   uint32_t buckets);

// out = mean of feature-table rows (zeros for an empty feature list).
void MeanFeatureRows(const ReferenceEncoderParams &params,
                     std::span<const uint32_t> features, std::span<float> out);
// out = projection * input.
void Project(std::span<const float> projection, size_t input_width,
             std::span<const float> input, std::span<float> out);

class ReferenceEncoder : public EncoderContract {
 public:
  explicit ReferenceEncoder(ReferenceEncoderParams params);

  size_t dim() const override { return params_.config.dim; }
  SlotEmbeddings EmbedSlots(const OieTriple &triple,
                            bool with_context) const override;
  Embedding EmbedEntry(const KgEntry &entry,
                       bool mask_description) const override;

  SlotEmbeddings EmbedSlots(const TripleFeatures &features) const;
  Embedding EmbedEntry(const EntryFeatures &features) const;

  const ReferenceEncoderParams &params() const { return params_; }

 private:
  ReferenceEncoderParams params_;
};

// Slot vectors are keyed "<OieKey>/<slot>" ("<OieKey>/ctx/<slot>" for the
// with-context variant); entry vectors by entry id.
std::string SlotVectorKey(const OieTriple &triple, Slot slot,
                          bool with_context);

// Serves stored vectors, renormalized. The description mask does not apply.
class ImportedEncoder : public EncoderContract {
 public:
  // Reads {key, vector} records. All vectors must share one dimension (and
  // equal `expected_dim` when non-zero), else DimensionMismatch.
  static ImportedEncoder Load(std::istream &in, size_t expected_dim = 0);
  static ImportedEncoder LoadFile(const std::filesystem::path &path,
                                  size_t expected_dim = 0);

  size_t dim() const override { return dim_; }
  SlotEmbeddings EmbedSlots(const OieTriple &triple,
                            bool with_context) const override;
  Embedding EmbedEntry(const KgEntry &entry,
                       bool mask_description) const override;

  // Throws MissingVector.
  const Embedding &Lookup(const std::string &key) const;
  size_t size() const { return vectors_.size(); }

 private:
  size_t dim_ = 0;
  std::unordered_map<std::string, Embedding> vectors_;
};

// Writes {key, vector} records for every store entry and every slot of the
// given triples, in the import format.
void ExportEmbeddings(const EncoderContract &encoder, const KgStore &store,
                      std::span<const OieTriple> triples, bool with_context,
                      std::ostream &out);

}  // namespace factlink

#endif  // FACTLINK_ENCODER_H_
