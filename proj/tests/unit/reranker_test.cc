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
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "factlink/reranker.h"
#include "factlink/status.h"
#include "fixtures.h"

namespace factlink {
namespace {

using testing::JordanStore;
using testing::MakeAlignment;
using testing::Triple;

SlotLinkResult Lists(size_t k) {
  SlotLinkResult r;
  for (size_t i = 0; i < k; ++i) {
    r.slots[0].push_back({"s" + std::to_string(i), 1.0 - i * 0.1});
    r.slots[1].push_back({"r" + std::to_string(i), 1.0 - i * 0.1});
    r.slots[2].push_back({"o" + std::to_string(i), 1.0 - i * 0.1});
  }
  return r;
}

TEST(EnumerateCandidates, CubeOfK) {
  EXPECT_EQ(EnumerateCandidates(Lists(1)).size(), 1u);
  EXPECT_EQ(EnumerateCandidates(Lists(2)).size(), 8u);
  EXPECT_EQ(EnumerateCandidates(Lists(3)).size(), 27u);
  const auto c = EnumerateCandidates(Lists(2));
  EXPECT_EQ(c[0].fact, (KgFact{"s0", "r0", "o0"}));
  EXPECT_EQ(c[1].fact, (KgFact{"s0", "r0", "o1"}));
  EXPECT_EQ(c[7].ranks, (std::array<size_t, 3>{1, 1, 1}));
  std::set<KgFact> distinct;
  for (const auto &x : EnumerateCandidates(Lists(3))) distinct.insert(x.fact);
  EXPECT_EQ(distinct.size(), 27u);
}

SlotEmbeddings UnitSlots(size_t dim, Rng &rng) {
  SlotEmbeddings s;
  for (Slot slot : kAllSlots) {
    std::vector<float> v(dim);
    for (float &x : v) x = static_cast<float>(rng.Normal());
    s[slot] = Normalized(std::move(v));
  }
  return s;
}

TEST(CrossFeatures, LayoutAndWidth) {
  EXPECT_EQ(CrossFeatureWidth(4), 21u);
  Rng rng(2);
  const SlotEmbeddings s = UnitSlots(4, rng);
  const SlotEmbeddings e = UnitSlots(4, rng);
  const auto x = CrossFeatures(
      s, {e.slots[0].values, e.slots[1].values, e.slots[2].values});
  ASSERT_EQ(x.size(), 21u);
  for (size_t i = 0; i < 3; ++i) {
    const size_t base = i * 7;
    double cos = 0.0;
    for (size_t j = 0; j < 4; ++j) {
      EXPECT_FLOAT_EQ(x[base + j], s.slots[i].values[j] * e.slots[i].values[j]);
      cos += s.slots[i].values[j] * e.slots[i].values[j];
    }
    EXPECT_NEAR(x[base + 4], cos, 1e-6);
    EXPECT_NEAR(x[base + 5], cos * cos, 1e-6);
    EXPECT_EQ(x[base + 6], 1.0f);
  }
}

TEST(CrossScorer, ZeroScorerIsOneHalf) {
  const CrossScorerParams zero = CrossScorerParams::Zero(5);
  const std::vector<float> x(CrossFeatureWidth(5), 0.7f);
  EXPECT_EQ(zero.Score(x), 0.5);
  EXPECT_EQ(zero.Logit(x), 0.0);
}

TEST(CrossScorer, SaveLoadRoundTrip) {
  CrossScorerParams p = CrossScorerParams::Zero(3, 7);
  for (size_t i = 0; i < p.weights.size(); ++i) p.weights[i] = 0.1f * i - 0.5f;
  p.bias = -0.25;
  std::stringstream buffer;
  p.Save(buffer, {"h", 7});
  const CrossScorerParams q = CrossScorerParams::Load(buffer);
  EXPECT_EQ(q.dim, 3u);
  EXPECT_EQ(q.seed, 7u);
  EXPECT_EQ(q.weights, p.weights);
  EXPECT_EQ(q.bias, p.bias);
  p.weights.pop_back();
  EXPECT_THROW(p.Validate(), Error);
}

TEST(Bce, GradientMatchesFiniteDifferences) {
  Rng rng(17);
  const size_t dim = 3;
  for (int point = 0; point < 20; ++point) {
    CrossScorerParams p = CrossScorerParams::Zero(dim);
    for (float &w : p.weights) w = static_cast<float>(rng.UniformReal(-1, 1));
    p.bias = rng.UniformReal(-1, 1);
    std::vector<float> x(CrossFeatureWidth(dim));
    for (float &v : x) v = static_cast<float>(rng.UniformReal(-1, 1));
    const double label = rng.Bernoulli(0.5) ? 1.0 : 0.0;
    const BceGradient g = BceWithGradient(p, x, label);
    auto close = [](double a, double n) {
      return std::abs(a - n) <= 1e-4 * std::max(1.0, std::abs(n));
    };
    const double h = 1e-6;
    CrossScorerParams up = p, down = p;
    up.bias += h;
    down.bias -= h;
    const double db = (BceWithGradient(up, x, label).loss -
                       BceWithGradient(down, x, label).loss) /
                      (2 * h);
    EXPECT_TRUE(close(g.d_bias, db)) << g.d_bias << " vs " << db;
    // Weights are float; difference at the weight through its feature.
    const size_t j = rng.Uniform(x.size());
    const double hw = 1e-3;
    up = p;
    down = p;
    up.weights[j] += static_cast<float>(hw);
    down.weights[j] -= static_cast<float>(hw);
    const double actual = static_cast<double>(up.weights[j]) - down.weights[j];
    const double dw = (BceWithGradient(up, x, label).loss -
                       BceWithGradient(down, x, label).loss) /
                      actual;
    EXPECT_NEAR(g.d_weights[j], dw, 1e-4 * std::max(1.0, std::abs(dw)));
  }
  const CrossScorerParams zero = CrossScorerParams::Zero(dim);
  const std::vector<float> x(CrossFeatureWidth(dim), 1.0f);
  EXPECT_NEAR(BceWithGradient(zero, x, 1.0).loss, std::log(2.0), 1e-12);
  EXPECT_NEAR(BceWithGradient(zero, x, 0.0).d_bias, 0.5, 1e-12);
}

TEST(ArgmaxFirst, FirstMaximumWins) {
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{0.1, 0.9, 0.3, 0.9}), 1u);
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{0.5}), 0u);
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{0.5, 0.5, 0.5}), 0u);
  EXPECT_THROW(ArgmaxFirst(std::vector<double>{}), Error);
}

TEST(SampleHardNegative, UniformSlotAndNeighborOnly) {
  const NeighborLists lists = {{"A", {"A2", "A3"}},
                               {"R", {"R2"}},
                               {"B", {"B2", "B3", "B4"}}};
  const KgFact gold{"A", "R", "B"};
  Rng rng(23);
  const int n = 6000;
  std::array<int, 3> changed{};
  for (int i = 0; i < n; ++i) {
    const KgFact neg = SampleHardNegative(gold, lists, rng);
    int diffs = 0;
    for (Slot s : kAllSlots) {
      if (FactSlot(neg, s) != FactSlot(gold, s)) {
        ++diffs;
        ++changed[static_cast<size_t>(s)];
        const auto &options = lists.at(FactSlot(gold, s));
        EXPECT_NE(std::find(options.begin(), options.end(), FactSlot(neg, s)),
                  options.end());
      }
    }
    EXPECT_EQ(diffs, 1);
  }
  const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  for (int c : changed) EXPECT_NEAR(c, n / 3.0, 3 * sigma);
}

TEST(SampleHardNegative, IneligibleSlotsAndErrors) {
  const NeighborLists only_object = {{"B", {"B", "B2"}}};
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const KgFact neg = SampleHardNegative({"A", "R", "B"}, only_object, rng);
    EXPECT_EQ(neg, (KgFact{"A", "R", "B2"}));
  }
  EXPECT_THROW(SampleHardNegative({"A", "R", "B"}, {}, rng), Error);
}

TEST(NeighborLists, ExcludeSelfAndRoundTrip) {
  const KgStore store = JordanStore();
  EncoderConfig c;
  c.dim = 8;
  c.hidden = 4;
  c.buckets = 256;
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(c));
  const KgIndices indices = BuildKgIndices(enc, store);
  const NeighborLists lists = BuildNeighborLists(indices, 3);
  EXPECT_EQ(lists.size(), store.entries().size());
  for (const auto &[id, neighbors] : lists) {
    EXPECT_EQ(std::count(neighbors.begin(), neighbors.end(), id), 0);
    EXPECT_EQ(store.Get(neighbors[0]).kind, store.Get(id).kind);
  }
  EXPECT_EQ(lists.at("P54").size(), 2u);
  EXPECT_EQ(lists.at("Q340").size(), 3u);
  std::stringstream buffer;
  SaveNeighborLists(lists, buffer);
  EXPECT_EQ(LoadNeighborLists(buffer), lists);
}

std::vector<Alignment> JordanAlignments() {
  return {
      MakeAlignment("s1", Triple("Michael Jordan", "played for", "the Bulls"),
                    {"Q41421", "P54", "Q128109"}),
      MakeAlignment("s2", Triple("Air Jordan", "lived in", "Wilmington"),
                    {"Q41421", "P551", "Q659400"}),
      MakeAlignment("s3", Triple("Pierre Hétu", "was born in", "Montreal"),
                    {"Q3385492", "P19", "Q340"}),
  };
}

TEST(TrainReranker, GoldOutscoresCorruptedFacts) {
  const KgStore store = JordanStore();
  EncoderConfig c;
  c.dim = 16;
  c.hidden = 8;
  c.buckets = 1024;
  c.seed = 2;
  const auto alignments = JordanAlignments();
  PrerankTrainConfig pre;
  pre.epochs = 40;
  pre.learning_rate = 0.5;
  pre.batch_size = 2;
  pre.global_neg_entities = 4;
  pre.global_neg_predicates = 2;
  const ReferenceEncoder enc(
      TrainPreranker(alignments, store, pre, c).params);
  RerankTrainConfig config;
  config.epochs = 60;
  config.learning_rate = 0.1;
  config.seed = 5;
  const RerankTrainResult a = TrainReranker(alignments, enc, store, config);
  const RerankTrainResult b = TrainReranker(alignments, enc, store, config);
  EXPECT_EQ(a.params.weights, b.params.weights);
  EXPECT_LT(a.trace.back().mean_loss, a.trace.front().mean_loss);

  const NeighborLists lists = BuildNeighborLists(BuildKgIndices(enc, store), 10);
  Rng rng(99);
  int wins = 0, total = 0;
  for (const Alignment &al : alignments) {
    const double gold =
        ScoreFact(a.params, enc, store, al.oie, al.fact, false, false);
    for (int i = 0; i < 30; ++i) {
      const KgFact neg = SampleHardNegative(al.fact, lists, rng);
      wins += gold > ScoreFact(a.params, enc, store, al.oie, neg, false, false);
      ++total;
    }
  }
  EXPECT_GE(wins, 0.9 * total);
}

TEST(TrainReranker, NoNegativesStillRuns) {
  const KgStore store = JordanStore();
  EncoderConfig c;
  c.dim = 8;
  c.hidden = 4;
  c.buckets = 256;
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(c));
  RerankTrainConfig config;
  config.epochs = 2;
  config.negatives_per_positive = 0;
  const auto r = TrainReranker(JordanAlignments(), enc, store, config);
  EXPECT_EQ(r.trace.size(), 2u);
  for (float w : r.params.weights) EXPECT_TRUE(std::isfinite(w));
  EXPECT_THROW(TrainReranker({}, enc, store, config), Error);
}

TEST(Rerank, PicksHighestScoringCandidate) {
  const KgStore store = JordanStore();
  EncoderConfig c;
  c.dim = 8;
  c.hidden = 4;
  c.buckets = 256;
  const ReferenceEncoder enc(ReferenceEncoderParams::Initialize(c));
  const KgIndices indices = BuildKgIndices(enc, store);
  const OieTriple t = Triple("Michael Jordan", "played for", "the Bulls");
  const SlotLinkResult links = Link(enc, indices, t, 2, false);
  const auto candidates = EnumerateCandidates(links);
  CrossScorerParams p = CrossScorerParams::Zero(c.dim);
  // Weight only the cosine features: the score orders by summed similarity.
  for (size_t i = 0; i < 3; ++i) p.weights[i * (c.dim + 3) + c.dim] = 1.0f;
  const RerankResult r = Rerank(p, enc.EmbedSlots(t, false), candidates, indices);
  ASSERT_EQ(r.scores.size(), 8u);
  EXPECT_EQ(r.best.fact, links.LinkedFact());
  const RerankResult zero = Rerank(CrossScorerParams::Zero(c.dim),
                                   enc.EmbedSlots(t, false), candidates, indices);
  EXPECT_EQ(zero.best, candidates[0]);
  EXPECT_THROW(Rerank(p, enc.EmbedSlots(t, false), {}, indices), Error);
}

}  // namespace
}  // namespace factlink
