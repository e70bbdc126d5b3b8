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

// Out-of-KG detection per OIE slot: top-1 confidence and entropy over the
// softmax of the five best similarities, and a query-key-value attention
// head over the pre-ranked entries.
//
// A statistic exactly at its threshold always decides InKg.

#ifndef FACTLINK_OOKG_H_
#define FACTLINK_OOKG_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/encoder.h"
#include "factlink/kg_store.h"
#include "factlink/preranker.h"
#include "factlink/random.h"

namespace factlink {

inline constexpr size_t kDetectorSupport = 5;

enum class Decision { kInKg, kOutOfKg };
enum class Scenario { kImputed, kRemoved };
std::string_view DecisionName(Decision d);
std::string_view ScenarioName(Scenario s);

std::vector<double> TopKSoftmax(std::span<const double> sims);
// Shannon entropy in nats, with 0 log 0 = 0.
double Entropy(std::span<const double> probs);

struct OokgThresholds {
  std::array<double, 3> confidence = {0.235, 0.260, 0.235};
  std::array<double, 3> entropy = {1.60, 1.58, 1.60};
  // One value per slot; all slots share 0.3 unless calibrated separately.
  std::array<double, 3> attention = {0.3, 0.3, 0.3};
  size_t grid_size = 0;  // 0 when not calibrated

  // Throws InvalidArgument when a value is outside its range.
  void Validate() const;
  Json ToJson() const;
  static OokgThresholds FromJson(const Json &record);
  void SaveFile(const std::filesystem::path &path,
                const ArtifactHeader &header = {}) const;
  static OokgThresholds LoadFile(const std::filesystem::path &path);
};

Decision ConfidenceDetect(std::span<const double> probs, Slot slot,
                          const OokgThresholds &thresholds);
Decision EntropyDetect(double entropy, Slot slot,
                       const OokgThresholds &thresholds);

struct QkvParams {
  size_t dim = 0;
  std::vector<float> query;  // dim x dim, row-major
  std::vector<float> key;
  std::vector<float> value;
  double scale = 1.0;
  double bias = 0.0;

  static QkvParams Identity(size_t dim);
  void Validate() const;

  void Save(std::ostream &out, const ArtifactHeader &header = {}) const;
  static QkvParams Load(std::istream &in);
  void SaveFile(const std::filesystem::path &path,
                const ArtifactHeader &header = {}) const;
  static QkvParams LoadFile(const std::filesystem::path &path);
};

// a = softmax((Q q) . (K k_j) / sqrt(d)), c = sum_j a_j V k_j,
// score = sigmoid(s (q . c) + b). Throws EmptyKeySet.
double QkvScore(const QkvParams &params, std::span<const float> query,
                std::span<const std::span<const float>> keys);

struct QkvGradient {
  double loss = 0.0;
  std::vector<double> query;
  std::vector<double> key;
  std::vector<double> value;
  double scale = 0.0;
  double bias = 0.0;
};
// Binary cross-entropy of QkvScore against `label` and its gradient.
QkvGradient QkvWithGradient(const QkvParams &params,
                            std::span<const float> query,
                            std::span<const std::span<const float>> keys,
                            double label);

struct QkvTrainConfig {
  size_t epochs = 3;
  double learning_rate = 1e-2;
  double weight_decay = 0.0;
  size_t keys = 64;
  double gold_prob = 0.5;
  bool with_context = false;
  uint64_t seed = 0;
};

struct QkvTrainResult {
  QkvParams params;
  std::vector<double> epoch_loss;
};

// Per (alignment, slot): a key set of up to `keys` same-kind entries that
// contains the gold entry with probability gold_prob (label 1), padded with
// uniform non-gold entries.
QkvTrainResult TrainQkv(std::span<const Alignment> alignments,
                        const EncoderContract &encoder, const KgIndices &indices,
                        const QkvTrainConfig &config);

struct CalibrationResult {
  double threshold = 0.0;
  double accuracy = 0.0;
  size_t grid_size = 0;
};

// `out_when_below`: OutOfKg iff statistic < threshold (confidence, qkv);
// otherwise OutOfKg iff statistic > threshold (entropy). Accuracy is the
// mean of per-class accuracies; ties go to the smallest threshold.
CalibrationResult CalibrateThreshold(std::span<const double> statistics,
                                     std::span<const bool> out_of_kg,
                                     bool out_when_below,
                                     size_t grid_size = 200);

// What a detector sees for one (alignment, slot, scenario) trial.
struct DetectionInput {
  Slot slot = Slot::kSubject;
  Scenario scenario = Scenario::kImputed;
  std::span<const float> query;
  // Best-first candidates from the scenario's view of the index.
  std::span<const ScoredId> ranked;
  const EmbeddingIndex *index = nullptr;
  // Only the oracle may look at this.
  bool gold_present = true;
};

struct Detection {
  Decision decision = Decision::kInKg;
  double statistic = 0.0;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::string_view name() const = 0;
  // Number of ranked candidates the detector needs.
  virtual size_t depth() const { return kDetectorSupport; }
  virtual Detection Detect(const DetectionInput &input) = 0;
};

std::unique_ptr<Detector> MakeConfidenceDetector(OokgThresholds thresholds);
std::unique_ptr<Detector> MakeEntropyDetector(OokgThresholds thresholds);
std::unique_ptr<Detector> MakeQkvDetector(QkvParams params,
                                          OokgThresholds thresholds,
                                          size_t keys = 64);
std::unique_ptr<Detector> MakeCoinDetector(uint64_t seed);
std::unique_ptr<Detector> MakeConstantDetector(Decision decision);
std::unique_ptr<Detector> MakeOracleDetector();

struct DetectionRecord {
  size_t index = 0;  // position in the evaluated alignment list
  std::string id;
  Slot slot = Slot::kSubject;
  Scenario scenario = Scenario::kImputed;
  Decision decision = Decision::kInKg;
  double statistic = 0.0;
  bool correct = false;
};
Json DetectionRecordToJson(const DetectionRecord &record);

struct OokgReport {
  std::string detector;
  size_t n = 0;
  std::array<double, 3> slot_accuracy{};
  double fact_accuracy = 0.0;
  std::vector<DetectionRecord> records;
};

// Runs every alignment under both scenarios: imputed (gold entries present)
// and removed (the fact's gold entries masked out of the index view). Slot
// accuracy averages the two scenarios; fact accuracy counts alignments with
// all three slots right, averaged over the scenarios. Throws
// EmptyEvaluation.
OokgReport OokgEvaluate(Detector &detector, std::span<const Alignment> test,
                        const EncoderContract &encoder,
                        const KgIndices &indices, bool with_context = false);

// Detector statistics for calibration: one row per (alignment, slot,
// scenario) with the out-of-KG label.
struct CalibrationSample {
  Slot slot = Slot::kSubject;
  double statistic = 0.0;
  bool out_of_kg = false;
};
std::vector<CalibrationSample> CollectStatistics(
    Detector &detector, std::span<const Alignment> alignments,
    const EncoderContract &encoder, const KgIndices &indices,
    bool with_context = false);

}  // namespace factlink

#endif  // FACTLINK_OOKG_H_
