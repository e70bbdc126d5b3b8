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

// Whole-fact re-ranking over the cartesian product of per-slot candidates.
//
// The cross scorer works on frozen pre-ranker embeddings. For slot pairs
// (s_i, e_i), i in subject/relation/object, the feature vector is
//   concat_i [ s_i * e_i (elementwise), cos_i, cos_i^2, 1 ]
// of width 3 * (d + 3), and score = sigmoid(w . x + b).

#ifndef FACTLINK_RERANKER_H_
#define FACTLINK_RERANKER_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/encoder.h"
#include "factlink/kg_store.h"
#include "factlink/preranker.h"
#include "factlink/random.h"

namespace factlink {

struct CandidateFact {
  KgFact fact;
  // Position of each id in its slot list, subject/relation/object.
  std::array<size_t, 3> ranks{};

  bool operator==(const CandidateFact &) const = default;
};

// Cartesian product of the three slot lists in rank-lexicographic order.
std::vector<CandidateFact> EnumerateCandidates(const SlotLinkResult &result);

size_t CrossFeatureWidth(size_t dim);
std::vector<float> CrossFeatures(
    const SlotEmbeddings &slots,
    const std::array<std::span<const float>, 3> &entries);

struct CrossScorerParams {
  size_t dim = 0;
  uint64_t seed = 0;
  std::vector<float> weights;
  double bias = 0.0;

  static CrossScorerParams Zero(size_t dim, uint64_t seed = 0);

  double Logit(std::span<const float> features) const;
  double Score(std::span<const float> features) const;
  // Throws DimensionMismatch or NumericFailure.
  void Validate() const;

  // Line-delimited: artifact header, {dim, seed, bias}, {weights}.
  void Save(std::ostream &out, const ArtifactHeader &header = {}) const;
  static CrossScorerParams Load(std::istream &in);
  void SaveFile(const std::filesystem::path &path,
                const ArtifactHeader &header = {}) const;
  static CrossScorerParams LoadFile(const std::filesystem::path &path);
};

// Scores against precomputed entry embeddings (plain or description-masked).
double ScoreFact(const CrossScorerParams &params, const SlotEmbeddings &slots,
                 const KgFact &fact, const KgIndices &entries);
// Encodes everything on the fly.
double ScoreFact(const CrossScorerParams &params,
                 const EncoderContract &encoder, const KgStore &store,
                 const OieTriple &triple, const KgFact &fact,
                 bool mask_description, bool with_context);

struct RerankResult {
  CandidateFact best;
  std::vector<double> scores;  // aligned with the candidate list
};

// Argmax over candidates; the first maximum wins. Throws EmptyEvaluation on
// an empty list.
RerankResult Rerank(const CrossScorerParams &params,
                    const SlotEmbeddings &slots,
                    std::span<const CandidateFact> candidates,
                    const KgIndices &entries);
size_t ArgmaxFirst(std::span<const double> scores);

// Entry id -> ids of its most similar same-kind entries, excluding itself.
using NeighborLists = std::unordered_map<std::string, std::vector<std::string>>;
NeighborLists BuildNeighborLists(const KgIndices &indices, size_t k = 10);
void SaveNeighborLists(const NeighborLists &lists, std::ostream &out,
                       const ArtifactHeader &header = {});
NeighborLists LoadNeighborLists(std::istream &in);

// Replaces one uniformly chosen slot with a uniform draw from that entry's
// neighbors (ids equal to the gold entry are skipped). Slots whose list is
// empty are not eligible; throws InvalidArgument when none is.
KgFact SampleHardNegative(const KgFact &fact, const NeighborLists &neighbors,
                          Rng &rng);

struct BceGradient {
  double loss = 0.0;
  std::vector<double> d_weights;
  double d_bias = 0.0;
};
// Binary cross-entropy of sigmoid(w . x + b) against `label` in {0, 1}.
BceGradient BceWithGradient(const CrossScorerParams &params,
                            std::span<const float> features, double label);

struct RerankTrainConfig {
  size_t epochs = 10;
  double learning_rate = 5e-5;
  double weight_decay = 1e-3;
  size_t hard_negative_pool = 10;
  double description_mask_prob = 0.5;
  size_t negatives_per_positive = 3;
  bool with_context = false;
  uint64_t seed = 0;
};

struct RerankEpochTrace {
  size_t epoch = 0;
  double mean_loss = 0.0;
};

struct RerankTrainResult {
  CrossScorerParams params;
  std::vector<RerankEpochTrace> trace;
};

// Per-pair SGD with decoupled weight decay. `neighbors` defaults to lists
// of size config.hard_negative_pool built from the encoder's entries.
RerankTrainResult TrainReranker(std::span<const Alignment> alignments,
                                const EncoderContract &encoder,
                                const KgStore &store,
                                const RerankTrainConfig &config,
                                const NeighborLists *neighbors = nullptr);

}  // namespace factlink

#endif  // FACTLINK_RERANKER_H_
