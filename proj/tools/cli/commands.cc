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

#include "cli/commands.h"

#include <fstream>
#include <vector>

#include "factlink/evalkit.h"
#include "factlink/status.h"

namespace factlink::cli {

namespace {

KgStore LoadFilteredKg(const RunConfig &c) {
  RequireExisting({&c.paths.kg_entries, &c.paths.kg_facts});
  return FilterByFrequency(
      LoadKgFiles(c.paths.kg_entries, c.paths.kg_facts, c.benchmark.surface),
      c.benchmark.min_frequency);
}

Benchmark LoadBenchmark(const RunConfig &c) {
  const std::filesystem::path alignments = c.Output("alignments.jsonl");
  RequireExisting({&alignments});
  return AssembleBenchmark(LoadFilteredKg(c), LoadAlignmentsFile(alignments),
                           c.benchmark);
}

std::vector<Alignment> LoadFacet(const RunConfig &c, SplitKind kind) {
  const std::filesystem::path path = c.Output(SplitFileName(kind));
  RequireExisting({&path});
  return LoadAlignmentsFile(path);
}

std::unique_ptr<EncoderContract> LoadEncoder(const RunConfig &c) {
  if (!c.paths.embeddings.empty()) {
    RequireExisting({&c.paths.embeddings});
    return std::make_unique<ImportedEncoder>(
        ImportedEncoder::LoadFile(c.paths.embeddings));
  }
  const std::filesystem::path path = c.EncoderPath();
  RequireExisting({&path});
  return std::make_unique<ReferenceEncoder>(
      ReferenceEncoderParams::LoadFile(path));
}

OokgThresholds LoadThresholds(const RunConfig &c) {
  if (c.paths.thresholds.empty()) return {};
  RequireExisting({&c.paths.thresholds});
  return OokgThresholds::LoadFile(c.paths.thresholds);
}

void Prepare(const RunConfig &c) {
  std::filesystem::create_directories(c.paths.output_dir);
}

template <typename Trace, typename ToJson>
void WriteTrace(const std::filesystem::path &path, const ArtifactHeader &header,
                const std::vector<Trace> &trace, ToJson to_json) {
  std::ofstream out = OpenForWrite(path);
  out << DumpRecord(HeaderRecord(header)) << '\n';
  for (const Trace &t : trace) out << DumpRecord(to_json(t)) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void WriteRecords(const std::filesystem::path &path,
                  const ArtifactHeader &header, const std::vector<Json> &rows) {
  std::ofstream out = OpenForWrite(path);
  out << DumpRecord(HeaderRecord(header)) << '\n';
  for (const Json &row : rows) out << DumpRecord(row) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

bool LinkWithContext(const RunConfig &c) { return c.evaluate.with_context; }

std::vector<KgFact> ModelPredictions(const RunConfig &c,
                                     const EncoderContract &encoder,
                                     const KgIndices &indices,
                                     std::span<const Alignment> alignments,
                                     std::ostream &log) {
  const size_t k = c.evaluate.rerank_k;
  if (k == 0) {
    return PrerankPredictions(encoder, indices, alignments, LinkWithContext(c));
  }
  const std::filesystem::path path = c.Output("scorer.jsonl");
  RequireExisting({&path});
  const CrossScorerParams scorer = CrossScorerParams::LoadFile(path);
  if (scorer.dim != encoder.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scorer dim " + std::to_string(scorer.dim) + " vs encoder " +
                    std::to_string(encoder.dim()));
  }
  log << "rerank_k=" << k << ": " << k * k * k << " candidates per OIE\n";
  return RerankPredictions(encoder, indices, scorer, alignments, k,
                           LinkWithContext(c));
}

Json FactJson(const KgFact &f) {
  return Json{{"subject", f.subject},
              {"predicate", f.predicate},
              {"object", f.object}};
}

}  // namespace

void CmdBuildBenchmark(const RunConfig &c, std::ostream &log) {
  RequireExisting({&c.paths.kg_entries, &c.paths.kg_facts, &c.paths.oies,
                   &c.paths.pairs});
  const KgStore kg =
      LoadKgFiles(c.paths.kg_entries, c.paths.kg_facts, c.benchmark.surface);
  std::ifstream oie_in = OpenForRead(c.paths.oies);
  std::ifstream pair_in = OpenForRead(c.paths.pairs);
  const std::vector<SentenceOie> oies = LoadOies(oie_in);
  const std::vector<SentenceFactPair> pairs = LoadPairs(pair_in);
  log << "loaded " << kg.entity_ids().size() << " entities, "
      << kg.predicate_ids().size() << " predicates, " << kg.facts().size()
      << " facts, " << oies.size() << " OIEs, " << pairs.size() << " pairs\n";

  const Benchmark b = BuildBenchmark(kg, oies, pairs, c.benchmark);
  Prepare(c);
  WriteBenchmark(b, c.paths.output_dir, HeaderFor(c));
  log << "alignments: " << b.train.size() << " train, " << b.validation.size()
      << " validation, " << b.test.size() << " test\n";
  for (SplitKind kind : kAllSplitKinds) {
    log << "split " << SplitKindName(kind) << ": "
        << b.splits.at(kind).alignments.size() << "\n";
  }
}

void CmdSplit(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const ArtifactHeader header = HeaderFor(c);
  std::ofstream stats = OpenForWrite(c.Output("stats.jsonl"));
  stats << DumpRecord(HeaderRecord(header)) << '\n';
  for (SplitKind kind : kAllSplitKinds) {
    const SplitResult &split = b.splits.at(kind);
    WriteAlignments(split.alignments, c.Output(SplitFileName(kind)), header);
    stats << DumpRecord(StatsToJson(kind, split.stats)) << '\n';
    log << "split " << SplitKindName(kind) << ": " << split.alignments.size()
        << "\n";
  }
  if (!stats) throw Error(ErrorCode::kIo, "failed writing stats.jsonl");
}

void CmdTrainPreranker(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const std::filesystem::path path = c.EncoderPath();
  PrerankTrainResult result;
  if (c.resume && std::filesystem::exists(path)) {
    log << "resuming from " << path.string() << "\n";
    PrerankTrainer trainer(b.train, b.brkg, c.preranker,
                           ReferenceEncoderParams::LoadFile(path));
    result = trainer.Train();
  } else {
    result = TrainPreranker(b.train, b.brkg, c.preranker, c.encoder);
  }
  Prepare(c);
  const ArtifactHeader header = HeaderFor(c);
  result.params.SaveFile(path, header);
  WriteTrace(c.Output("preranker_trace.jsonl"), header, result.trace,
             TraceToJson);
  log << "preranker: " << result.trace.size() << " epochs, final loss "
      << result.trace.back().mean_loss << ", tau "
      << result.trace.back().temperature << "\n";
}

void CmdTrainReranker(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const std::unique_ptr<EncoderContract> encoder = LoadEncoder(c);
  const NeighborLists neighbors = BuildNeighborLists(
      BuildKgIndices(*encoder, b.brkg), c.reranker.hard_negative_pool);
  const RerankTrainResult result =
      TrainReranker(b.train, *encoder, b.brkg, c.reranker, &neighbors);
  Prepare(c);
  const ArtifactHeader header = HeaderFor(c);
  {
    std::ofstream out = OpenForWrite(c.Output("neighbors.jsonl"));
    SaveNeighborLists(neighbors, out, header);
  }
  result.params.SaveFile(c.Output("scorer.jsonl"), header);
  WriteTrace(c.Output("reranker_trace.jsonl"), header, result.trace,
             [](const RerankEpochTrace &t) {
               return Json{{"epoch", t.epoch}, {"mean_loss", t.mean_loss}};
             });
  log << "reranker: " << result.trace.size() << " epochs, final loss "
      << result.trace.back().mean_loss << "\n";
}

void CmdTrainOokg(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const std::unique_ptr<EncoderContract> encoder = LoadEncoder(c);
  const KgIndices indices = BuildKgIndices(*encoder, b.brkg);
  const QkvTrainResult qkv = TrainQkv(b.train, *encoder, indices, c.ookg.qkv);
  Prepare(c);
  const ArtifactHeader header = HeaderFor(c);
  qkv.params.SaveFile(c.Output("qkv.jsonl"), header);
  std::vector<Json> trace;
  for (size_t i = 0; i < qkv.epoch_loss.size(); ++i) {
    trace.push_back(Json{{"epoch", i + 1}, {"mean_loss", qkv.epoch_loss[i]}});
  }
  WriteRecords(c.Output("ookg_trace.jsonl"), header, trace);
  log << "qkv: " << qkv.epoch_loss.size() << " epochs, final loss "
      << qkv.epoch_loss.back() << "\n";

  // Thresholds are fit on the validation partition under the same
  // imputed/removed protocol the evaluation uses.
  if (b.validation.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation,
                "no validation alignments to calibrate thresholds");
  }
  OokgThresholds calibrated;
  calibrated.grid_size = c.ookg.grid_size;
  const bool ctx = c.ookg.qkv.with_context;
  struct Target {
    std::unique_ptr<Detector> detector;
    std::array<double, 3> *thresholds;
    bool out_when_below;
  };
  Target targets[] = {
      {MakeConfidenceDetector({}), &calibrated.confidence, true},
      {MakeEntropyDetector({}), &calibrated.entropy, false},
      {MakeQkvDetector(qkv.params, {}, c.ookg.qkv.keys), &calibrated.attention,
       true},
  };
  for (Target &t : targets) {
    const std::vector<CalibrationSample> samples =
        CollectStatistics(*t.detector, b.validation, *encoder, indices, ctx);
    for (Slot s : kAllSlots) {
      std::vector<double> stats;
      std::vector<bool> labels;
      for (const CalibrationSample &sample : samples) {
        if (sample.slot != s) continue;
        stats.push_back(sample.statistic);
        labels.push_back(sample.out_of_kg);
      }
      std::unique_ptr<bool[]> flags(new bool[labels.size()]);
      for (size_t i = 0; i < labels.size(); ++i) flags[i] = labels[i];
      const CalibrationResult r = CalibrateThreshold(
          stats, std::span<const bool>(flags.get(), labels.size()),
          t.out_when_below, c.ookg.grid_size);
      (*t.thresholds)[static_cast<size_t>(s)] = r.threshold;
      log << t.detector->name() << " " << SlotName(s) << ": threshold "
          << r.threshold << ", validation accuracy " << r.accuracy << "\n";
    }
  }
  calibrated.SaveFile(c.Output("thresholds.jsonl"), header);
}

void CmdTrain(const RunConfig &c, std::string_view stage, std::ostream &log) {
  if (stage == "preranker") return CmdTrainPreranker(c, log);
  if (stage == "reranker") return CmdTrainReranker(c, log);
  if (stage == "ookg") return CmdTrainOokg(c, log);
  throw Error(ErrorCode::kInvalidArgument,
              "unknown training stage '" + std::string(stage) + "'");
}

void CmdIndex(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const KgStore &store = StoreVariant(b, c.evaluate.store);
  const std::unique_ptr<EncoderContract> encoder = LoadEncoder(c);
  const KgIndices indices = BuildKgIndices(*encoder, store);
  Prepare(c);
  const ArtifactHeader header = HeaderFor(c);
  for (const EmbeddingIndex *index : {&indices.entities, &indices.predicates}) {
    const std::string name = "index_" + std::string(EntryKindName(index->kind())) +
                             "_" + c.evaluate.store + ".flix";
    index->SaveFile(c.Output(name));
    // The binary format has no room for provenance, so it gets a sidecar.
    WriteRecords(c.Output(name + ".header.jsonl"), header,
                 {Json{{"kind", EntryKindName(index->kind())},
                       {"count", index->size()},
                       {"dim", index->dim()}}});
    log << "indexed " << index->size() << " " << EntryKindName(index->kind())
        << " rows into " << name << "\n";
  }
}

void CmdLink(const RunConfig &c, std::ostream &log) {
  const Benchmark b = LoadBenchmark(c);
  const SplitKind kind = ParseSplitKind(c.evaluate.facet);
  const std::vector<Alignment> alignments = LoadFacet(c, kind);
  const std::unique_ptr<EncoderContract> encoder = LoadEncoder(c);
  const KgIndices indices =
      BuildKgIndices(*encoder, StoreVariant(b, c.evaluate.store));
  const std::vector<KgFact> predictions =
      ModelPredictions(c, *encoder, indices, alignments, log);
  std::vector<Json> rows;
  rows.reserve(alignments.size());
  for (size_t i = 0; i < alignments.size(); ++i) {
    rows.push_back(Json{{"sentence_id", alignments[i].sentence_id},
                        {"oie", OieKey(alignments[i].oie)},
                        {"prediction", FactJson(predictions[i])},
                        {"gold", FactJson(alignments[i].fact)},
                        {"correct", predictions[i] == alignments[i].fact}});
  }
  Prepare(c);
  const std::string name = "predictions_" + c.evaluate.facet + "_" +
                           c.evaluate.store + ".jsonl";
  WriteRecords(c.Output(name), HeaderFor(c), rows);
  log << "linked " << rows.size() << " OIEs into " << name << "\n";
}

namespace {

EvalReport EvaluateFacet(const RunConfig &c, const Benchmark &b,
                         const EncoderContract *encoder,
                         const KgIndices *indices, SplitKind kind,
                         std::ostream &log) {
  const std::vector<Alignment> alignments = LoadFacet(c, kind);
  const std::string &linker = c.evaluate.linker;
  std::vector<KgFact> predictions;
  if (linker == "model") {
    predictions = ModelPredictions(c, *encoder, *indices, alignments, log);
  } else {
    std::unique_ptr<Linker> baseline;
    if (linker == "frequency") {
      baseline = std::make_unique<FrequencyLinker>(FrequencyLinker::Fit(b.train));
    } else {
      baseline = std::make_unique<RandomLinker>(
          StoreVariant(b, c.evaluate.store), c.seed);
    }
    for (const Alignment &a : alignments) {
      predictions.push_back(baseline->LinkFact(a.oie));
    }
  }
  const std::string store =
      &StoreVariant(b, c.evaluate.store) == &b.brkg ? "BRKG" : "Large";
  return ScoreLinking(predictions, GoldFacts(alignments),
                      std::string(SplitKindName(kind)), store);
}

EvalReport OokgAsReport(const OokgReport &r, const std::string &split) {
  EvalReport out;
  out.split = split;
  out.store = r.detector;
  // One imputed and one removed trial per alignment.
  out.n = 2 * r.n;
  for (size_t s = 0; s < 3; ++s) {
    out.slots[s] = {r.slot_accuracy[s], BernoulliSem(r.slot_accuracy[s], out.n)};
  }
  out.fact = {r.fact_accuracy, BernoulliSem(r.fact_accuracy, out.n)};
  return out;
}

}  // namespace

void CmdEvaluate(const RunConfig &c, std::ostream &out, std::ostream &log) {
  const ReportFormat format = ParseReportFormat(c.evaluate.format);
  const std::string &linker = c.evaluate.linker;
  if (linker != "model" && linker != "frequency" && linker != "random") {
    throw Error(ErrorCode::kInvalidArgument, "unknown linker '" + linker + "'");
  }
  const Benchmark b = LoadBenchmark(c);
  const KgStore &store = StoreVariant(b, c.evaluate.store);

  std::vector<SplitKind> kinds;
  if (c.evaluate.facet == "all") {
    kinds.assign(std::begin(kAllSplitKinds), std::end(kAllSplitKinds));
  } else {
    kinds.push_back(ParseSplitKind(c.evaluate.facet));
  }

  std::unique_ptr<EncoderContract> encoder;
  KgIndices indices;
  if (linker == "model" || !c.evaluate.detector.empty()) {
    encoder = LoadEncoder(c);
    indices = BuildKgIndices(*encoder, store);
  }

  std::vector<EvalReport> reports;
  if (!c.evaluate.detector.empty()) {
    for (SplitKind kind : kinds) {
      const std::unique_ptr<Detector> detector =
          MakeDetector(c, c.evaluate.detector);
      const OokgReport r = OokgEvaluate(*detector, LoadFacet(c, kind), *encoder,
                                        indices, c.evaluate.with_context);
      reports.push_back(OokgAsReport(r, std::string(SplitKindName(kind))));
    }
  } else {
    for (SplitKind kind : kinds) {
      reports.push_back(
          EvaluateFacet(c, b, encoder.get(), &indices, kind, log));
    }
    if (reports.size() > 1) reports.push_back(MacroScore(reports));
  }

  Prepare(c);
  std::string name = "report_" + c.evaluate.facet + "_" + c.evaluate.store;
  if (!c.evaluate.detector.empty()) name += "_" + c.evaluate.detector;
  if (c.evaluate.rerank_k > 0) name += "_k" + std::to_string(c.evaluate.rerank_k);
  if (c.evaluate.with_context) name += "_ctx";
  if (linker != "model") name += "_" + linker;
  name += ".jsonl";
  std::ofstream file = OpenForWrite(c.Output(name));
  file << DumpRecord(HeaderRecord(HeaderFor(c))) << '\n'
       << EmitReports(reports, ReportFormat::kRecords);
  if (!file) throw Error(ErrorCode::kIo, "failed writing " + name);
  out << EmitReports(reports, format);
  log << "wrote " << name << "\n";
}

void CmdDetect(const RunConfig &c, std::ostream &out, std::ostream &log) {
  const std::string name =
      c.evaluate.detector.empty() ? "entropy" : c.evaluate.detector;
  const Benchmark b = LoadBenchmark(c);
  const std::unique_ptr<EncoderContract> encoder = LoadEncoder(c);
  const KgIndices indices =
      BuildKgIndices(*encoder, StoreVariant(b, c.evaluate.store));
  const SplitKind kind = SplitKind::kOutOfKg;
  const std::unique_ptr<Detector> detector = MakeDetector(c, name);
  const OokgReport r = OokgEvaluate(*detector, LoadFacet(c, kind), *encoder,
                                    indices, c.evaluate.with_context);
  std::vector<Json> rows;
  rows.reserve(r.records.size());
  for (const DetectionRecord &rec : r.records) {
    rows.push_back(DetectionRecordToJson(rec));
  }
  Prepare(c);
  const std::string file = "detections_" + name + "_" +
                           std::string(SplitKindName(kind)) + ".jsonl";
  WriteRecords(c.Output(file), HeaderFor(c), rows);
  out << name << " on " << SplitKindName(kind) << " (" << 2 * r.n
      << " paired trials): subject " << r.slot_accuracy[0] << ", relation "
      << r.slot_accuracy[1] << ", object " << r.slot_accuracy[2] << ", fact "
      << r.fact_accuracy << "\n";
  log << "wrote " << file << "\n";
}

std::unique_ptr<Detector> MakeDetector(const RunConfig &c,
                                       std::string_view name) {
  if (name == "confidence") return MakeConfidenceDetector(LoadThresholds(c));
  if (name == "entropy") return MakeEntropyDetector(LoadThresholds(c));
  if (name == "qkv") {
    const std::filesystem::path path = c.Output("qkv.jsonl");
    RequireExisting({&path});
    return MakeQkvDetector(QkvParams::LoadFile(path), LoadThresholds(c),
                           c.ookg.qkv.keys);
  }
  if (name == "coin") return MakeCoinDetector(c.seed);
  if (name == "constant") return MakeConstantDetector(Decision::kInKg);
  if (name == "oracle") return MakeOracleDetector();
  throw Error(ErrorCode::kInvalidArgument,
              "unknown detector '" + std::string(name) + "'");
}

}  // namespace factlink::cli
