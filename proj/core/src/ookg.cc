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

#include "factlink/ookg.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "factlink/status.h"

namespace factlink {

std::string_view DecisionName(Decision d) {
  return d == Decision::kInKg ? "in_kg" : "out_of_kg";
}

std::string_view ScenarioName(Scenario s) {
  return s == Scenario::kImputed ? "imputed" : "removed";
}

std::vector<double> TopKSoftmax(std::span<const double> sims) {
  if (sims.empty()) return {};
  const double max = *std::max_element(sims.begin(), sims.end());
  std::vector<double> out(sims.size());
  double sum = 0.0;
  for (size_t i = 0; i < sims.size(); ++i) {
    out[i] = std::exp(sims[i] - max);
    sum += out[i];
  }
  for (double &p : out) p /= sum;
  return out;
}

double Entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

void OokgThresholds::Validate() const {
  const double max_entropy = std::log(static_cast<double>(kDetectorSupport));
  for (size_t i = 0; i < 3; ++i) {
    if (!(confidence[i] > 0.0 && confidence[i] < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "confidence threshold outside (0,1)");
    }
    if (!(entropy[i] >= 0.0 && entropy[i] <= max_entropy)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "entropy threshold outside [0, ln 5]");
    }
    if (!(attention[i] > 0.0 && attention[i] < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "attention threshold outside (0,1)");
    }
  }
}

Json OokgThresholds::ToJson() const {
  return Json{{"confidence", confidence},
              {"entropy", entropy},
              {"attention", attention},
              {"grid_size", grid_size}};
}

OokgThresholds OokgThresholds::FromJson(const Json &record) {
  OokgThresholds t;
  try {
    if (record.contains("confidence")) {
      t.confidence = record.at("confidence").get<std::array<double, 3>>();
    }
    if (record.contains("entropy")) {
      t.entropy = record.at("entropy").get<std::array<double, 3>>();
    }
    if (record.contains("attention")) {
      t.attention = record.at("attention").get<std::array<double, 3>>();
    }
    if (record.contains("grid_size")) {
      t.grid_size = record.at("grid_size").get<size_t>();
    }
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("thresholds: ") + e.what());
  }
  t.Validate();
  return t;
}

void OokgThresholds::SaveFile(const std::filesystem::path &path,
                              const ArtifactHeader &header) const {
  std::ofstream out = OpenForWrite(path);
  out << DumpRecord(HeaderRecord(header)) << '\n'
      << DumpRecord(ToJson()) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

OokgThresholds OokgThresholds::LoadFile(const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  std::optional<OokgThresholds> t;
  ForEachRecord(in, path.string(), [&](size_t, const Json &rec) {
    t = FromJson(rec);
  });
  if (!t) throw Error(ErrorCode::kMalformedRecord, path.string() + ": empty");
  return *t;
}

Decision ConfidenceDetect(std::span<const double> probs, Slot slot,
                          const OokgThresholds &thresholds) {
  if (probs.empty()) throw Error(ErrorCode::kEmptyEvaluation, "no probs");
  const double top = *std::max_element(probs.begin(), probs.end());
  return top < thresholds.confidence[static_cast<size_t>(slot)]
             ? Decision::kOutOfKg
             : Decision::kInKg;
}

Decision EntropyDetect(double entropy, Slot slot,
                       const OokgThresholds &thresholds) {
  return entropy > thresholds.entropy[static_cast<size_t>(slot)]
             ? Decision::kOutOfKg
             : Decision::kInKg;
}

QkvParams QkvParams::Identity(size_t dim) {
  QkvParams p;
  p.dim = dim;
  p.query.assign(dim * dim, 0.0f);
  for (size_t i = 0; i < dim; ++i) p.query[i * dim + i] = 1.0f;
  p.key = p.query;
  p.value = p.query;
  return p;
}

void QkvParams::Validate() const {
  const size_t n = dim * dim;
  if (query.size() != n || key.size() != n || value.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "qkv matrices");
  }
  auto finite = [](const std::vector<float> &m) {
    return std::all_of(m.begin(), m.end(),
                       [](float v) { return std::isfinite(v); });
  };
  if (!finite(query) || !finite(key) || !finite(value) ||
      !std::isfinite(scale) || !std::isfinite(bias)) {
    throw Error(ErrorCode::kNumericFailure, "non-finite qkv params");
  }
}

void QkvParams::Save(std::ostream &out, const ArtifactHeader &header) const {
  out << DumpRecord(HeaderRecord(header)) << '\n';
  out << DumpRecord(Json{{"dim", dim}, {"scale", scale}, {"bias", bias}})
      << '\n';
  for (auto [name, m] : {std::pair{"query", &query}, std::pair{"key", &key},
                         std::pair{"value", &value}}) {
    Json values = Json::array();
    for (float v : *m) values.push_back(v);
    out << DumpRecord(Json{{"matrix", name}, {"values", values}}) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing qkv params");
}

QkvParams QkvParams::Load(std::istream &in) {
  QkvParams p;
  ForEachRecord(in, "qkv", [&](size_t line, const Json &rec) {
    try {
      if (rec.contains("matrix")) {
        const std::string name = rec.at("matrix").get<std::string>();
        std::vector<float> *m = name == "query" ? &p.query
                                : name == "key" ? &p.key
                                : name == "value" ? &p.value
                                                  : nullptr;
        if (m == nullptr) {
          throw Error(ErrorCode::kMalformedRecord,
                      "qkv:" + std::to_string(line) + ": unknown matrix");
        }
        m->clear();
        for (const Json &v : rec.at("values")) m->push_back(v.get<float>());
      } else {
        p.dim = rec.at("dim").get<size_t>();
        p.scale = rec.at("scale").get<double>();
        p.bias = rec.at("bias").get<double>();
      }
    } catch (const Json::exception &e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "qkv:" + std::to_string(line) + ": " + e.what());
    }
  });
  p.Validate();
  return p;
}

void QkvParams::SaveFile(const std::filesystem::path &path,
                         const ArtifactHeader &header) const {
  std::ofstream out = OpenForWrite(path);
  Save(out, header);
}

QkvParams QkvParams::LoadFile(const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  return Load(in);
}

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// y = M x for a dim x dim row-major matrix.
std::vector<double> MatVec(const std::vector<float> &m,
                           std::span<const float> x) {
  const size_t d = x.size();
  std::vector<double> y(d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    const float *row = m.data() + i * d;
    double sum = 0.0;
    for (size_t j = 0; j < d; ++j) sum += static_cast<double>(row[j]) * x[j];
    y[i] = sum;
  }
  return y;
}

struct QkvForward {
  std::vector<double> q_proj;
  std::vector<std::vector<double>> k_proj;
  std::vector<std::vector<double>> v_proj;
  std::vector<double> attention;
  std::vector<double> context;
  double qc = 0.0;
  double logit = 0.0;
};

QkvForward RunQkv(const QkvParams &params, std::span<const float> query,
                  std::span<const std::span<const float>> keys) {
  if (keys.empty()) throw Error(ErrorCode::kEmptyKeySet, "qkv needs keys");
  const size_t d = params.dim;
  if (query.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "qkv query dim");
  }
  QkvForward f;
  f.q_proj = MatVec(params.query, query);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> logits(keys.size());
  for (size_t j = 0; j < keys.size(); ++j) {
    if (keys[j].size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "qkv key dim");
    }
    f.k_proj.push_back(MatVec(params.key, keys[j]));
    f.v_proj.push_back(MatVec(params.value, keys[j]));
    double dot = 0.0;
    for (size_t i = 0; i < d; ++i) dot += f.q_proj[i] * f.k_proj[j][i];
    logits[j] = dot * inv_sqrt_d;
  }
  f.attention = TopKSoftmax(logits);
  f.context.assign(d, 0.0);
  for (size_t j = 0; j < keys.size(); ++j) {
    for (size_t i = 0; i < d; ++i) {
      f.context[i] += f.attention[j] * f.v_proj[j][i];
    }
  }
  for (size_t i = 0; i < d; ++i) f.qc += query[i] * f.context[i];
  f.logit = params.scale * f.qc + params.bias;
  return f;
}

}  // namespace

double QkvScore(const QkvParams &params, std::span<const float> query,
                std::span<const std::span<const float>> keys) {
  return Sigmoid(RunQkv(params, query, keys).logit);
}

QkvGradient QkvWithGradient(const QkvParams &params,
                            std::span<const float> query,
                            std::span<const std::span<const float>> keys,
                            double label) {
  const QkvForward f = RunQkv(params, query, keys);
  const size_t d = params.dim;
  const size_t m = keys.size();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  QkvGradient g;
  g.loss = Softplus(f.logit) - label * f.logit;
  const double dz = Sigmoid(f.logit) - label;
  g.scale = dz * f.qc;
  g.bias = dz;
  g.query.assign(d * d, 0.0);
  g.key.assign(d * d, 0.0);
  g.value.assign(d * d, 0.0);

  // d(loss)/d(context) = dz * s * q.
  std::vector<double> d_context(d);
  for (size_t i = 0; i < d; ++i) d_context[i] = dz * params.scale * query[i];

  std::vector<double> d_attention(m);
  for (size_t j = 0; j < m; ++j) {
    double dot = 0.0;
    for (size_t i = 0; i < d; ++i) dot += d_context[i] * f.v_proj[j][i];
    d_attention[j] = dot;
  }
  double mean = 0.0;
  for (size_t j = 0; j < m; ++j) mean += f.attention[j] * d_attention[j];

  std::vector<double> d_q_proj(d, 0.0);
  for (size_t j = 0; j < m; ++j) {
    const double d_logit = f.attention[j] * (d_attention[j] - mean);
    const double a = f.attention[j];
    for (size_t r = 0; r < d; ++r) {
      const double dk = d_logit * f.q_proj[r] * inv_sqrt_d;
      const double dv = a * d_context[r];
      d_q_proj[r] += d_logit * f.k_proj[j][r] * inv_sqrt_d;
      double *gk = g.key.data() + r * d;
      double *gv = g.value.data() + r * d;
      for (size_t c = 0; c < d; ++c) {
        gk[c] += dk * keys[j][c];
        gv[c] += dv * keys[j][c];
      }
    }
  }
  for (size_t r = 0; r < d; ++r) {
    double *gq = g.query.data() + r * d;
    for (size_t c = 0; c < d; ++c) gq[c] = d_q_proj[r] * query[c];
  }
  return g;
}

QkvTrainResult TrainQkv(std::span<const Alignment> alignments,
                        const EncoderContract &encoder, const KgIndices &indices,
                        const QkvTrainConfig &config) {
  if (alignments.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no calibration alignments");
  }
  if (config.keys == 0) {
    throw Error(ErrorCode::kInvalidArgument, "keys must be positive");
  }
  struct Example {
    std::vector<float> query;
    const EmbeddingIndex *index;
    size_t gold;
  };
  std::vector<Example> examples;
  for (const Alignment &a : alignments) {
    const SlotEmbeddings slots = encoder.EmbedSlots(a.oie, config.with_context);
    for (Slot s : kAllSlots) {
      const EmbeddingIndex &index = indices.of(SlotKind(s));
      const auto row = index.RowOf(FactSlot(a.fact, s));
      if (!row) throw Error(ErrorCode::kUnknownId, FactSlot(a.fact, s));
      examples.push_back({slots[s].values, &index, *row});
    }
  }

  Rng order_rng(StreamSeed(config.seed, "qkv-order"));
  Rng key_rng(StreamSeed(config.seed, "qkv-keys"));
  QkvTrainResult result;
  result.params = QkvParams::Identity(encoder.dim());
  QkvParams &p = result.params;
  const double lr = config.learning_rate;
  const double wd = config.weight_decay;

  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<size_t> rows;
  std::unordered_set<size_t> chosen;
  std::vector<std::span<const float>> keys;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.Shuffle(order);
    double loss_sum = 0.0;
    for (size_t e : order) {
      const Example &ex = examples[e];
      const size_t available = ex.index->size() - 1;
      const bool include_gold = key_rng.Bernoulli(config.gold_prob);
      rows.clear();
      chosen.clear();
      if (include_gold) rows.push_back(ex.gold);
      const size_t fill =
          std::min(available, config.keys - (include_gold ? 1 : 0));
      if (fill == available) {
        for (size_t r = 0; r < ex.index->size(); ++r) {
          if (r != ex.gold) rows.push_back(r);
        }
      } else {
        while (chosen.size() < fill) {
          const size_t r = key_rng.Uniform(ex.index->size());
          if (r != ex.gold && chosen.insert(r).second) rows.push_back(r);
        }
      }
      if (rows.empty()) continue;
      keys.clear();
      for (size_t r : rows) keys.push_back(ex.index->row(r));
      const QkvGradient g =
          QkvWithGradient(p, ex.query, keys, include_gold ? 1.0 : 0.0);
      loss_sum += g.loss;
      auto step = [&](std::vector<float> &m, const std::vector<double> &gm) {
        for (size_t i = 0; i < m.size(); ++i) {
          m[i] -= static_cast<float>(lr * (gm[i] + wd * m[i]));
        }
      };
      step(p.query, g.query);
      step(p.key, g.key);
      step(p.value, g.value);
      p.scale -= lr * g.scale;
      p.bias -= lr * g.bias;
    }
    const double mean = loss_sum / static_cast<double>(examples.size());
    if (!std::isfinite(mean)) {
      throw Error(ErrorCode::kNumericFailure, "non-finite qkv loss");
    }
    result.epoch_loss.push_back(mean);
  }
  p.Validate();
  return result;
}

CalibrationResult CalibrateThreshold(std::span<const double> statistics,
                                     std::span<const bool> out_of_kg,
                                     bool out_when_below, size_t grid_size) {
  if (statistics.size() != out_of_kg.size()) {
    throw Error(ErrorCode::kInvalidArgument, "statistics and labels differ");
  }
  if (statistics.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no calibration samples");
  }
  if (grid_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid_size must be positive");
  }
  const auto [lo_it, hi_it] =
      std::minmax_element(statistics.begin(), statistics.end());
  const double lo = *lo_it, hi = *hi_it;
  const size_t n_out =
      static_cast<size_t>(std::count(out_of_kg.begin(), out_of_kg.end(), true));
  const size_t n_in = out_of_kg.size() - n_out;

  auto accuracy = [&](double t) {
    size_t right_in = 0, right_out = 0;
    for (size_t i = 0; i < statistics.size(); ++i) {
      const bool says_out =
          out_when_below ? statistics[i] < t : statistics[i] > t;
      if (out_of_kg[i]) {
        right_out += says_out;
      } else {
        right_in += !says_out;
      }
    }
    double sum = 0.0;
    int classes = 0;
    if (n_in > 0) sum += static_cast<double>(right_in) / n_in, ++classes;
    if (n_out > 0) sum += static_cast<double>(right_out) / n_out, ++classes;
    return sum / classes;
  };

  CalibrationResult best;
  best.grid_size = grid_size;
  best.accuracy = -1.0;
  for (size_t i = 0; i < grid_size; ++i) {
    const double t =
        grid_size == 1 || hi == lo
            ? lo
            : lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(grid_size - 1);
    const double acc = accuracy(t);
    if (acc > best.accuracy) {
      best.accuracy = acc;
      best.threshold = t;
    }
  }
  return best;
}

namespace {

std::vector<double> TopScores(std::span<const ScoredId> ranked, size_t n) {
  std::vector<double> out;
  for (size_t i = 0; i < std::min(n, ranked.size()); ++i) {
    out.push_back(ranked[i].score);
  }
  return out;
}

class ConfidenceDetector : public Detector {
 public:
  explicit ConfidenceDetector(OokgThresholds t) : t_(t) {}
  std::string_view name() const override { return "confidence"; }
  Detection Detect(const DetectionInput &in) override {
    const auto probs = TopKSoftmax(TopScores(in.ranked, kDetectorSupport));
    if (probs.empty()) return {Decision::kOutOfKg, 0.0};
    return {ConfidenceDetect(probs, in.slot, t_),
            *std::max_element(probs.begin(), probs.end())};
  }

 private:
  OokgThresholds t_;
};

class EntropyDetector : public Detector {
 public:
  explicit EntropyDetector(OokgThresholds t) : t_(t) {}
  std::string_view name() const override { return "entropy"; }
  Detection Detect(const DetectionInput &in) override {
    const double h =
        Entropy(TopKSoftmax(TopScores(in.ranked, kDetectorSupport)));
    return {EntropyDetect(h, in.slot, t_), h};
  }

 private:
  OokgThresholds t_;
};

class QkvDetector : public Detector {
 public:
  QkvDetector(QkvParams p, OokgThresholds t, size_t keys)
      : p_(std::move(p)), t_(t), keys_(keys) {}
  std::string_view name() const override { return "qkv"; }
  size_t depth() const override { return keys_; }
  Detection Detect(const DetectionInput &in) override {
    std::vector<std::span<const float>> keys;
    for (size_t i = 0; i < std::min(keys_, in.ranked.size()); ++i) {
      keys.push_back(in.index->row(*in.index->RowOf(in.ranked[i].id)));
    }
    const double score = QkvScore(p_, in.query, keys);
    const Decision d = score < t_.attention[static_cast<size_t>(in.slot)]
                           ? Decision::kOutOfKg
                           : Decision::kInKg;
    return {d, score};
  }

 private:
  QkvParams p_;
  OokgThresholds t_;
  size_t keys_;
};

class CoinDetector : public Detector {
 public:
  explicit CoinDetector(uint64_t seed) : rng_(StreamSeed(seed, "ookg-coin")) {}
  std::string_view name() const override { return "coin"; }
  size_t depth() const override { return 0; }
  Detection Detect(const DetectionInput &) override {
    const double u = rng_.UniformReal();
    return {u < 0.5 ? Decision::kOutOfKg : Decision::kInKg, u};
  }

 private:
  Rng rng_;
};

class ConstantDetector : public Detector {
 public:
  explicit ConstantDetector(Decision d) : d_(d) {}
  std::string_view name() const override {
    return d_ == Decision::kInKg ? "always_in_kg" : "always_out_of_kg";
  }
  size_t depth() const override { return 0; }
  Detection Detect(const DetectionInput &) override { return {d_, 0.0}; }

 private:
  Decision d_;
};

class OracleDetector : public Detector {
 public:
  std::string_view name() const override { return "oracle"; }
  size_t depth() const override { return 0; }
  Detection Detect(const DetectionInput &in) override {
    return {in.gold_present ? Decision::kInKg : Decision::kOutOfKg,
            in.gold_present ? 1.0 : 0.0};
  }
};

// Calls fn(index, alignment, slot, scenario, detection) for every trial.
template <typename Fn>
void RunTrials(Detector &detector, std::span<const Alignment> alignments,
               const EncoderContract &encoder, const KgIndices &indices,
               bool with_context, Fn fn) {
  const size_t depth = detector.depth();
  for (size_t i = 0; i < alignments.size(); ++i) {
    const Alignment &a = alignments[i];
    const SlotEmbeddings slots = encoder.EmbedSlots(a.oie, with_context);
    std::array<size_t, 3> gold_rows{};
    for (Slot s : kAllSlots) {
      const auto row = indices.of(SlotKind(s)).RowOf(FactSlot(a.fact, s));
      if (!row) throw Error(ErrorCode::kUnknownId, FactSlot(a.fact, s));
      gold_rows[static_cast<size_t>(s)] = *row;
    }
    const std::unordered_set<size_t> removed_entities{gold_rows[0],
                                                      gold_rows[2]};
    const std::unordered_set<size_t> removed_predicates{gold_rows[1]};
    for (Scenario scenario : {Scenario::kImputed, Scenario::kRemoved}) {
      for (Slot s : kAllSlots) {
        const EmbeddingIndex &index = indices.of(SlotKind(s));
        const std::unordered_set<size_t> *excluded = nullptr;
        if (scenario == Scenario::kRemoved) {
          excluded = SlotKind(s) == EntryKind::kEntity ? &removed_entities
                                                       : &removed_predicates;
        }
        const std::vector<ScoredId> ranked =
            depth == 0 ? std::vector<ScoredId>{}
                       : TopK(index, slots[s], depth, excluded);
        DetectionInput input;
        input.slot = s;
        input.scenario = scenario;
        input.query = slots[s].values;
        input.ranked = ranked;
        input.index = &index;
        input.gold_present = scenario == Scenario::kImputed;
        fn(i, a, s, scenario, detector.Detect(input));
      }
    }
  }
}

}  // namespace

std::unique_ptr<Detector> MakeConfidenceDetector(OokgThresholds thresholds) {
  return std::make_unique<ConfidenceDetector>(thresholds);
}
std::unique_ptr<Detector> MakeEntropyDetector(OokgThresholds thresholds) {
  return std::make_unique<EntropyDetector>(thresholds);
}
std::unique_ptr<Detector> MakeQkvDetector(QkvParams params,
                                          OokgThresholds thresholds,
                                          size_t keys) {
  return std::make_unique<QkvDetector>(std::move(params), thresholds, keys);
}
std::unique_ptr<Detector> MakeCoinDetector(uint64_t seed) {
  return std::make_unique<CoinDetector>(seed);
}
std::unique_ptr<Detector> MakeConstantDetector(Decision decision) {
  return std::make_unique<ConstantDetector>(decision);
}
std::unique_ptr<Detector> MakeOracleDetector() {
  return std::make_unique<OracleDetector>();
}

Json DetectionRecordToJson(const DetectionRecord &r) {
  return Json{{"index", r.index},
              {"id", r.id},
              {"slot", SlotName(r.slot)},
              {"scenario", ScenarioName(r.scenario)},
              {"decision", DecisionName(r.decision)},
              {"statistic", r.statistic},
              {"correct", r.correct}};
}

OokgReport OokgEvaluate(Detector &detector, std::span<const Alignment> test,
                        const EncoderContract &encoder,
                        const KgIndices &indices, bool with_context) {
  if (test.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no out-of-KG test alignments");
  }
  OokgReport report;
  report.detector = std::string(detector.name());
  report.n = test.size();
  std::array<size_t, 3> slot_hits{};
  // all_right[scenario][alignment]
  std::array<std::vector<int>, 2> all_right;
  all_right[0].assign(test.size(), 1);
  all_right[1].assign(test.size(), 1);
  RunTrials(detector, test, encoder, indices, with_context,
            [&](size_t i, const Alignment &a, Slot s, Scenario scenario,
                const Detection &d) {
              const bool correct =
                  (scenario == Scenario::kImputed) ==
                  (d.decision == Decision::kInKg);
              slot_hits[static_cast<size_t>(s)] += correct;
              if (!correct) all_right[static_cast<size_t>(scenario)][i] = 0;
              report.records.push_back({i, OieKey(a.oie), s, scenario,
                                        d.decision, d.statistic, correct});
            });
  const double trials = 2.0 * static_cast<double>(test.size());
  for (size_t s = 0; s < 3; ++s) {
    report.slot_accuracy[s] = static_cast<double>(slot_hits[s]) / trials;
  }
  const double facts =
      std::accumulate(all_right[0].begin(), all_right[0].end(), 0.0) +
      std::accumulate(all_right[1].begin(), all_right[1].end(), 0.0);
  report.fact_accuracy = facts / trials;
  return report;
}

std::vector<CalibrationSample> CollectStatistics(
    Detector &detector, std::span<const Alignment> alignments,
    const EncoderContract &encoder, const KgIndices &indices,
    bool with_context) {
  std::vector<CalibrationSample> out;
  RunTrials(detector, alignments, encoder, indices, with_context,
            [&](size_t, const Alignment &, Slot s, Scenario scenario,
                const Detection &d) {
              out.push_back({s, d.statistic, scenario == Scenario::kRemoved});
            });
  return out;
}

}  // namespace factlink
