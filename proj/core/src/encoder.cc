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

#include "factlink/encoder.h"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "factlink/random.h"
#include "factlink/status.h"

namespace factlink {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

double Embedding::Dot(const Embedding &other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(dim()) + " vs " + std::to_string(other.dim()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    sum += static_cast<double>(values[i]) * other.values[i];
  }
  return sum;
}

double Embedding::Norm() const { return std::sqrt(Dot(*this)); }

Embedding Normalized(std::vector<float> values) {
  double sq = 0.0;
  for (float v : values) sq += static_cast<double>(v) * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kNumericFailure, "cannot normalize vector");
  }
  for (float &v : values) v = static_cast<float>(v / norm);
  return Embedding{std::move(values)};
}

namespace {

template <typename Fn>
void ForEachToken(std::string_view text, Fn fn) {
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i > start) fn(text.substr(start, i - start));
  }
}

std::string Lowercase(std::string_view token) {
  std::string out(token);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Emits feature keys, or reserved bucket ids for markers, in text order.
template <typename KeyFn, typename MarkerFn>
void EmitFeatures(std::string_view text, KeyFn on_key, MarkerFn on_marker) {
  ForEachToken(text, [&](std::string_view token) {
    if (auto marker = ReservedMarkerIndex(token)) {
      on_marker(*marker, token);
      return;
    }
    const std::string word = Lowercase(token);
    on_key("w:" + word);
    const std::string bounded = "^" + word + "$";
    for (size_t i = 0; i + 3 <= bounded.size(); ++i) {
      on_key("t:" + bounded.substr(i, 3));
    }
  });
}

}  // namespace

std::vector<std::string> FeatureKeys(std::string_view text) {
  std::vector<std::string> keys;
  EmitFeatures(
      text, [&](std::string key) { keys.push_back(std::move(key)); },
      [&](size_t, std::string_view marker) {
        keys.push_back("m:" + std::string(marker));
      });
  return keys;
}

std::vector<uint32_t> Featurize(std::string_view text, uint32_t buckets) {
  if (buckets <= kReservedBuckets) {
    throw Error(ErrorCode::kInvalidArgument, "bucket count too small");
  }
  std::vector<uint32_t> features;
  const uint64_t hashed_space = buckets - kReservedBuckets;
  EmitFeatures(
      text,
      [&](const std::string &key) {
        features.push_back(
            kReservedBuckets +
            static_cast<uint32_t>(Fnv1a64(key) % hashed_space));
      },
      [&](size_t index, std::string_view) {
        features.push_back(static_cast<uint32_t>(index));
      });
  return features;
}

ReferenceEncoderParams ReferenceEncoderParams::Initialize(
    const EncoderConfig &config, double temperature) {
  if (config.dim == 0 || config.hidden == 0 ||
      config.buckets <= kReservedBuckets) {
    throw Error(ErrorCode::kInvalidArgument, "bad encoder dimensions");
  }
  ReferenceEncoderParams params;
  params.config = config;
  params.log_temperature = std::log(temperature);
  Rng rng(StreamSeed(config.seed, "encoder-init"));
  const double table_bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
  const double proj_bound =
      1.0 / std::sqrt(static_cast<double>(2 * config.hidden));
  params.feature_table.resize(static_cast<size_t>(config.buckets) *
                              config.hidden);
  for (float &v : params.feature_table) {
    v = static_cast<float>(rng.UniformReal(-table_bound, table_bound));
  }
  const size_t proj_size = config.dim * 2 * config.hidden;
  params.slot_projection.resize(proj_size);
  for (float &v : params.slot_projection) {
    v = static_cast<float>(rng.UniformReal(-proj_bound, proj_bound));
  }
  params.entry_projection.resize(proj_size);
  for (float &v : params.entry_projection) {
    v = static_cast<float>(rng.UniformReal(-proj_bound, proj_bound));
  }
  return params;
}

void ReferenceEncoderParams::Validate() const {
  const size_t proj_size = config.dim * input_width();
  if (feature_table.size() !=
          static_cast<size_t>(config.buckets) * config.hidden ||
      slot_projection.size() != proj_size ||
      entry_projection.size() != proj_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "encoder parameter shapes disagree with config");
  }
  auto finite = [](const std::vector<float> &values) {
    for (float v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  };
  if (!finite(feature_table) || !finite(slot_projection) ||
      !finite(entry_projection) || !std::isfinite(log_temperature)) {
    throw Error(ErrorCode::kNumericFailure, "non-finite encoder parameter");
  }
}

namespace {

constexpr char kParamsMagic[4] = {'F', 'L', 'E', 'P'};
constexpr uint32_t kParamsVersion = 1;

template <typename T>
void WritePod(std::ostream &out, const T &value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream &in) {
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) throw Error(ErrorCode::kMalformedRecord, "truncated binary file");
  return value;
}

void WriteFloats(std::ostream &out, const std::vector<float> &values) {
  out.write(reinterpret_cast<const char *>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
}

void ReadFloats(std::istream &in, std::vector<float> &values) {
  in.read(reinterpret_cast<char *>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!in) throw Error(ErrorCode::kMalformedRecord, "truncated binary file");
}

}  // namespace

void ReferenceEncoderParams::Save(std::ostream &out,
                                  const ArtifactHeader &header) const {
  out.write(kParamsMagic, 4);
  WritePod(out, kParamsVersion);
  const std::string header_json = DumpRecord(HeaderRecord(header));
  WritePod(out, static_cast<uint32_t>(header_json.size()));
  out.write(header_json.data(), static_cast<std::streamsize>(header_json.size()));
  WritePod(out, static_cast<uint64_t>(config.dim));
  WritePod(out, static_cast<uint64_t>(config.hidden));
  WritePod(out, config.buckets);
  WritePod(out, config.seed);
  WritePod(out, log_temperature);
  WriteFloats(out, feature_table);
  WriteFloats(out, slot_projection);
  WriteFloats(out, entry_projection);
  if (!out) throw Error(ErrorCode::kIo, "failed writing encoder params");
}

ReferenceEncoderParams ReferenceEncoderParams::Load(std::istream &in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kParamsMagic, 4) != 0) {
    throw Error(ErrorCode::kMalformedRecord, "not an encoder params file");
  }
  if (ReadPod<uint32_t>(in) != kParamsVersion) {
    throw Error(ErrorCode::kMalformedRecord, "unsupported params version");
  }
  const uint32_t header_size = ReadPod<uint32_t>(in);
  std::string header_json(header_size, '\0');
  in.read(header_json.data(), header_size);
  ReferenceEncoderParams params;
  params.config.dim = ReadPod<uint64_t>(in);
  params.config.hidden = ReadPod<uint64_t>(in);
  params.config.buckets = ReadPod<uint32_t>(in);
  params.config.seed = ReadPod<uint64_t>(in);
  params.log_temperature = ReadPod<double>(in);
  if (params.config.dim == 0 || params.config.hidden == 0 ||
      params.config.buckets <= kReservedBuckets ||
      params.config.dim > (1u << 16) || params.config.hidden > (1u << 16)) {
    throw Error(ErrorCode::kMalformedRecord, "bad encoder shapes");
  }
  params.feature_table.resize(static_cast<size_t>(params.config.buckets) *
                              params.config.hidden);
  const size_t proj_size = params.config.dim * params.input_width();
  params.slot_projection.resize(proj_size);
  params.entry_projection.resize(proj_size);
  ReadFloats(in, params.feature_table);
  ReadFloats(in, params.slot_projection);
  ReadFloats(in, params.entry_projection);
  params.Validate();
  return params;
}

void ReferenceEncoderParams::SaveFile(const std::filesystem::path &path,
                                      const ArtifactHeader &header) const {
  std::ofstream out = OpenForWrite(path);
  Save(out, header);
}

ReferenceEncoderParams ReferenceEncoderParams::LoadFile(
    const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  return Load(in);
}

TripleFeatures ExtractTripleFeatures(const OieTriple &triple,
                                     bool with_context, uint32_t buckets) {
  TripleFeatures features;
  for (Slot s : kAllSlots) {
    features.segments[static_cast<size_t>(s)] =
        Featurize(triple.slot(s), buckets);
  }
  features.triple = Featurize(OieText(triple, with_context), buckets);
  return features;
}

EntryFeatures ExtractEntryFeatures(const KgEntry &entry, bool mask_description,
                                   uint32_t buckets) {
  EntryFeatures features;
  features.label = Featurize(entry.label, buckets);
  if (entry.description && !mask_description) {
    features.description = Featurize(*entry.description, buckets);
  }
  return features;
}

void MeanFeatureRows(const ReferenceEncoderParams &params,
                     std::span<const uint32_t> features,
                     std::span<float> out) {
  const size_t h = params.config.hidden;
  std::fill(out.begin(), out.end(), 0.0f);
  if (features.empty()) return;
  for (uint32_t f : features) {
    const float *row = params.feature_table.data() + static_cast<size_t>(f) * h;
    for (size_t j = 0; j < h; ++j) out[j] += row[j];
  }
  const float scale = 1.0f / static_cast<float>(features.size());
  for (size_t j = 0; j < h; ++j) out[j] *= scale;
}

void Project(std::span<const float> projection, size_t input_width,
             std::span<const float> input, std::span<float> out) {
  for (size_t i = 0; i < out.size(); ++i) {
    const float *row = projection.data() + i * input_width;
    float sum = 0.0f;
    for (size_t j = 0; j < input_width; ++j) sum += row[j] * input[j];
    out[i] = sum;
  }
}

ReferenceEncoder::ReferenceEncoder(ReferenceEncoderParams params)
    : params_(std::move(params)) {
  params_.Validate();
}

SlotEmbeddings ReferenceEncoder::EmbedSlots(const OieTriple &triple,
                                            bool with_context) const {
  return EmbedSlots(
      ExtractTripleFeatures(triple, with_context, params_.config.buckets));
}

SlotEmbeddings ReferenceEncoder::EmbedSlots(
    const TripleFeatures &features) const {
  const size_t h = params_.config.hidden;
  std::vector<float> input(2 * h);
  MeanFeatureRows(params_, features.triple,
                  std::span<float>(input).subspan(h, h));
  SlotEmbeddings out;
  for (Slot s : kAllSlots) {
    MeanFeatureRows(params_, features.segments[static_cast<size_t>(s)],
                    std::span<float>(input).subspan(0, h));
    std::vector<float> projected(params_.config.dim);
    Project(params_.slot_projection, 2 * h, input, projected);
    out[s] = Normalized(std::move(projected));
  }
  return out;
}

Embedding ReferenceEncoder::EmbedEntry(const KgEntry &entry,
                                       bool mask_description) const {
  return EmbedEntry(
      ExtractEntryFeatures(entry, mask_description, params_.config.buckets));
}

Embedding ReferenceEncoder::EmbedEntry(const EntryFeatures &features) const {
  const size_t h = params_.config.hidden;
  std::vector<float> input(2 * h);
  MeanFeatureRows(params_, features.label,
                  std::span<float>(input).subspan(0, h));
  MeanFeatureRows(params_, features.description,
                  std::span<float>(input).subspan(h, h));
  std::vector<float> projected(params_.config.dim);
  Project(params_.entry_projection, 2 * h, input, projected);
  return Normalized(std::move(projected));
}

std::string SlotVectorKey(const OieTriple &triple, Slot slot,
                          bool with_context) {
  std::string key = OieKey(triple);
  key += with_context ? "/ctx/" : "/";
  key += SlotName(slot);
  return key;
}

ImportedEncoder ImportedEncoder::Load(std::istream &in, size_t expected_dim) {
  ImportedEncoder encoder;
  encoder.dim_ = expected_dim;
  ForEachRecord(in, "embeddings", [&](size_t line, const Json &record) {
    RecordReader reader(record, "embeddings", line);
    std::string key = reader.RequireString("key");
    auto it = record.find("vector");
    if (it == record.end() || !it->is_array()) reader.Fail("missing vector");
    std::vector<float> values;
    values.reserve(it->size());
    for (const Json &v : *it) {
      if (!v.is_number()) reader.Fail("non-numeric vector element");
      values.push_back(v.get<float>());
    }
    if (encoder.dim_ == 0) encoder.dim_ = values.size();
    if (values.size() != encoder.dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embeddings:" + std::to_string(line) + ": key " + key +
                      " has " + std::to_string(values.size()) +
                      " values, expected " + std::to_string(encoder.dim_));
    }
    if (!encoder.vectors_.emplace(key, Normalized(std::move(values))).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "embeddings:" + std::to_string(line) + ": " + key);
    }
  });
  return encoder;
}

ImportedEncoder ImportedEncoder::LoadFile(const std::filesystem::path &path,
                                          size_t expected_dim) {
  std::ifstream in = OpenForRead(path);
  return Load(in, expected_dim);
}

const Embedding &ImportedEncoder::Lookup(const std::string &key) const {
  auto it = vectors_.find(key);
  if (it == vectors_.end()) throw Error(ErrorCode::kMissingVector, key);
  return it->second;
}

SlotEmbeddings ImportedEncoder::EmbedSlots(const OieTriple &triple,
                                           bool with_context) const {
  SlotEmbeddings out;
  for (Slot s : kAllSlots) {
    out[s] = Lookup(SlotVectorKey(triple, s, with_context));
  }
  return out;
}

Embedding ImportedEncoder::EmbedEntry(const KgEntry &entry, bool) const {
  return Lookup(entry.id);
}

void ExportEmbeddings(const EncoderContract &encoder, const KgStore &store,
                      std::span<const OieTriple> triples, bool with_context,
                      std::ostream &out) {
  for (const KgEntry &entry : store.entries()) {
    Json record = {{"key", entry.id},
                   {"vector", encoder.EmbedEntry(entry, false).values}};
    out << DumpRecord(record) << '\n';
  }
  std::unordered_set<std::string> written;
  for (const OieTriple &triple : triples) {
    if (!written.insert(OieKey(triple)).second) continue;
    const SlotEmbeddings slots = encoder.EmbedSlots(triple, with_context);
    for (Slot s : kAllSlots) {
      Json record = {{"key", SlotVectorKey(triple, s, with_context)},
                     {"vector", slots[s].values}};
      out << DumpRecord(record) << '\n';
    }
  }
}

}  // namespace factlink
