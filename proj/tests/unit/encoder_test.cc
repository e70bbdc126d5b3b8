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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "factlink/encoder.h"
#include "factlink/random.h"
#include "factlink/status.h"
#include "factlink/text.h"
#include "fixtures.h"

namespace factlink {
namespace {

using testing::JordanStore;
using testing::Triple;

EncoderConfig SmallConfig(uint64_t seed = 3) {
  EncoderConfig c;
  c.dim = 8;
  c.hidden = 6;
  c.buckets = 512;
  c.seed = seed;
  return c;
}

// Straight-line recomputation of one embedding from the parameter arrays.
std::vector<double> Oracle(const ReferenceEncoderParams &p,
                           const std::vector<uint32_t> &first,
                           const std::vector<uint32_t> &second,
                           const std::vector<float> &projection) {
  const size_t h = p.config.hidden;
  std::vector<double> input(2 * h, 0.0);
  auto mean = [&](const std::vector<uint32_t> &f, size_t offset) {
    for (uint32_t b : f)
      for (size_t j = 0; j < h; ++j)
        input[offset + j] += p.feature_table[b * h + j] / double(f.size());
  };
  if (!first.empty()) mean(first, 0);
  if (!second.empty()) mean(second, h);
  std::vector<double> out(p.config.dim, 0.0);
  double norm = 0.0;
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t j = 0; j < 2 * h; ++j)
      out[i] += projection[i * 2 * h + j] * input[j];
    norm += out[i] * out[i];
  }
  for (double &v : out) v /= std::sqrt(norm);
  return out;
}

void ExpectNear(const Embedding &e, const std::vector<double> &expected) {
  ASSERT_EQ(e.dim(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i)
    EXPECT_NEAR(e.values[i], expected[i], 1e-5);
}

TEST(FeatureKeys, WordAndTrigrams) {
  EXPECT_EQ(FeatureKeys("Bulls"),
            (std::vector<std::string>{"w:bulls", "t:^bu", "t:bul", "t:ull",
                                      "t:lls", "t:ls$"}));
  EXPECT_EQ(FeatureKeys("a"), (std::vector<std::string>{"w:a", "t:^a$"}));
  EXPECT_EQ(FeatureKeys("<SUBJ> x"),
            (std::vector<std::string>{"m:<SUBJ>", "w:x", "t:^x$"}));
}

TEST(Featurize, MarkersUseReservedBuckets) {
  const auto f = Featurize("<SUBJ> <REL> <OBJ> <DESC> <SENT> <FACT> <mask>", 512);
  EXPECT_EQ(f, (std::vector<uint32_t>{0, 1, 2, 3, 4, 5, 6}));
  for (uint32_t b : Featurize("Chicago Bulls basketball", 512)) {
    EXPECT_GE(b, kReservedBuckets);
    EXPECT_LT(b, 512u);
  }
  EXPECT_EQ(Featurize("Bulls", 512)[0],
            kReservedBuckets + Fnv1a64("w:bulls") % (512 - kReservedBuckets));
  EXPECT_THROW(Featurize("x", kReservedBuckets), Error);
}

TEST(Normalized, UnitNormAndZeroVector) {
  const Embedding e = Normalized({3.0f, 4.0f});
  EXPECT_NEAR(e.values[0], 0.6, 1e-7);
  EXPECT_NEAR(e.Norm(), 1.0, 1e-7);
  EXPECT_THROW(Normalized({0.0f, 0.0f}), Error);
  EXPECT_THROW(Normalized({NAN, 1.0f}), Error);
}

TEST(ReferenceEncoder, MatchesStraightLineComputation) {
  const auto params = ReferenceEncoderParams::Initialize(SmallConfig());
  const ReferenceEncoder enc(params);
  const OieTriple t = Triple("Michael Jordan", "played for", "the Bulls",
                             "Jordan played for the Bulls in 1991.");
  for (bool ctx : {false, true}) {
    const SlotEmbeddings got = enc.EmbedSlots(t, ctx);
    const auto triple = Featurize(OieText(t, ctx), 512);
    for (Slot s : kAllSlots)
      ExpectNear(got[s], Oracle(params, Featurize(t.slot(s), 512), triple,
                                params.slot_projection));
  }
  const KgStore store = JordanStore();
  const KgEntry &mj = store.Get("Q41421");
  ExpectNear(enc.EmbedEntry(mj, false),
             Oracle(params, Featurize(mj.label, 512),
                    Featurize(*mj.description, 512), params.entry_projection));
  ExpectNear(enc.EmbedEntry(mj, true),
             Oracle(params, Featurize(mj.label, 512), {},
                    params.entry_projection));
}

TEST(ReferenceEncoder, MaskEqualsMissingDescription) {
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(SmallConfig()));
  KgEntry with = JordanStore().Get("Q3308205");
  KgEntry without = with;
  without.description.reset();
  const Embedding masked = enc.EmbedEntry(with, true);
  EXPECT_EQ(masked.values, enc.EmbedEntry(without, false).values);
  EXPECT_NE(masked.values, enc.EmbedEntry(with, false).values);
}

TEST(ReferenceEncoder, HomonymsDifferOnlyThroughDescription) {
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(SmallConfig()));
  const KgStore store = JordanStore();
  const Embedding a = enc.EmbedEntry(store.Get("Q41421"), false);
  const Embedding b = enc.EmbedEntry(store.Get("Q3308205"), false);
  EXPECT_LT(a.Dot(b), 1.0 - 1e-6);
  EXPECT_EQ(enc.EmbedEntry(store.Get("Q41421"), true).values,
            enc.EmbedEntry(store.Get("Q3308205"), true).values);
}

TEST(ReferenceEncoder, ContextChangesEverySlot) {
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(SmallConfig()));
  const OieTriple t = Triple("Jordan", "studied", "machine learning",
                             "The computer scientist Jordan studied it.");
  const SlotEmbeddings plain = enc.EmbedSlots(t, false);
  const SlotEmbeddings ctx = enc.EmbedSlots(t, true);
  for (Slot s : kAllSlots) EXPECT_NE(plain[s].values, ctx[s].values);
  EXPECT_THROW(enc.EmbedSlots(Triple("a", "b", "c"), true), Error);
}

TEST(ReferenceEncoderParams, InitializationIsSeededAndBounded) {
  const auto a = ReferenceEncoderParams::Initialize(SmallConfig(1));
  const auto b = ReferenceEncoderParams::Initialize(SmallConfig(1));
  const auto c = ReferenceEncoderParams::Initialize(SmallConfig(2));
  EXPECT_EQ(a.feature_table, b.feature_table);
  EXPECT_NE(a.feature_table, c.feature_table);
  const double table_bound = 1.0 / std::sqrt(6.0);
  const double proj_bound = 1.0 / std::sqrt(12.0);
  for (float v : a.feature_table) EXPECT_LE(std::abs(v), table_bound);
  for (float v : a.slot_projection) EXPECT_LE(std::abs(v), proj_bound);
  EXPECT_NEAR(std::exp(a.log_temperature), 0.07, 1e-12);
}

TEST(ReferenceEncoderParams, BinaryRoundTripIsExact) {
  auto p = ReferenceEncoderParams::Initialize(SmallConfig());
  p.log_temperature = -2.5;
  std::stringstream buffer;
  p.Save(buffer, {"abc", 7});
  const std::string bytes = buffer.str();
  const auto q = ReferenceEncoderParams::Load(buffer);
  EXPECT_EQ(q.config.dim, p.config.dim);
  EXPECT_EQ(q.config.hidden, p.config.hidden);
  EXPECT_EQ(q.config.buckets, p.config.buckets);
  EXPECT_EQ(q.feature_table, p.feature_table);
  EXPECT_EQ(q.slot_projection, p.slot_projection);
  EXPECT_EQ(q.entry_projection, p.entry_projection);
  EXPECT_EQ(q.log_temperature, p.log_temperature);
  std::stringstream again;
  q.Save(again, {"abc", 7});
  EXPECT_EQ(again.str(), bytes);
}

TEST(ReferenceEncoderParams, RejectsCorruptInput) {
  std::stringstream bad("NOPE and more bytes");
  EXPECT_THROW(ReferenceEncoderParams::Load(bad), Error);
  auto p = ReferenceEncoderParams::Initialize(SmallConfig());
  std::stringstream buffer;
  p.Save(buffer);
  std::string truncated = buffer.str();
  truncated.resize(truncated.size() / 2);
  std::stringstream cut(truncated);
  EXPECT_THROW(ReferenceEncoderParams::Load(cut), Error);
  p.slot_projection.pop_back();
  EXPECT_THROW(p.Validate(), Error);
}

TEST(ImportedEncoder, ServesRenormalizedVectors) {
  const OieTriple t = Triple("Michael Jordan", "played for", "the Bulls");
  std::stringstream in;
  in << R"({"key":"Q41421","vector":[3,4]})" << "\n";
  for (Slot s : kAllSlots)
    in << R"({"key":")" << SlotVectorKey(t, s, false)
       << R"(","vector":[0,2]})" << "\n";
  const ImportedEncoder enc = ImportedEncoder::Load(in);
  EXPECT_EQ(enc.dim(), 2u);
  EXPECT_EQ(enc.size(), 4u);
  const Embedding e = enc.EmbedEntry(JordanStore().Get("Q41421"), true);
  EXPECT_NEAR(e.values[0], 0.6, 1e-7);
  EXPECT_NEAR(enc.EmbedSlots(t, false)[Slot::kObject].values[1], 1.0, 1e-7);
  try {
    enc.EmbedSlots(t, true);
    FAIL();
  } catch (const Error &err) {
    EXPECT_EQ(err.code(), ErrorCode::kMissingVector);
  }
}

TEST(ImportedEncoder, DimensionAndDuplicateErrors) {
  auto code_of = [](const std::string &text, size_t dim) {
    std::stringstream in(text);
    try {
      ImportedEncoder::Load(in, dim);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code_of("{\"key\":\"a\",\"vector\":[1,0]}\n"
                    "{\"key\":\"b\",\"vector\":[1,0,0]}\n",
                    0),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of("{\"key\":\"a\",\"vector\":[1,0]}\n", 3),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of("{\"key\":\"a\",\"vector\":[1,0]}\n"
                    "{\"key\":\"a\",\"vector\":[0,1]}\n",
                    0),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(code_of("{\"key\":\"a\"}\n", 0), ErrorCode::kMalformedRecord);
}

TEST(ExportEmbeddings, ImportReproducesReferenceEncoder) {
  const ReferenceEncoder ref(ReferenceEncoderParams::Initialize(SmallConfig()));
  const KgStore store = JordanStore();
  const std::vector<OieTriple> triples = {
      Triple("Michael Jordan", "played for", "the Bulls"),
      Triple("Pierre Hétu", "was born in", "Montreal")};
  std::stringstream buffer;
  ExportEmbeddings(ref, store, triples, false, buffer);
  const ImportedEncoder imported = ImportedEncoder::Load(buffer, ref.dim());
  EXPECT_EQ(imported.size(), store.entries().size() + 3 * triples.size());
  for (const KgEntry &e : store.entries()) {
    const Embedding a = ref.EmbedEntry(e, false);
    const Embedding b = imported.EmbedEntry(e, false);
    EXPECT_NEAR(a.Dot(b), 1.0, 1e-6);
  }
  for (const OieTriple &t : triples)
    for (Slot s : kAllSlots)
      EXPECT_NEAR(ref.EmbedSlots(t, false)[s].Dot(imported.EmbedSlots(t, false)[s]),
                  1.0, 1e-6);
}

}  // namespace
}  // namespace factlink
