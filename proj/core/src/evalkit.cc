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

#include "factlink/evalkit.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

#include "factlink/jsonl.h"
#include "factlink/status.h"

namespace factlink {

double BernoulliSem(double p, size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

EvalReport ScoreLinking(std::span<const KgFact> predictions,
                        std::span<const KgFact> gold, std::string split,
                        std::string store) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and gold differ in length");
  }
  EvalReport report;
  report.split = std::move(split);
  report.store = std::move(store);
  report.n = gold.size();
  std::array<size_t, 3> hits{};
  size_t fact_hits = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    bool all = true;
    for (Slot s : kAllSlots) {
      const bool hit = FactSlot(predictions[i], s) == FactSlot(gold[i], s);
      hits[static_cast<size_t>(s)] += hit;
      all = all && hit;
    }
    fact_hits += all;
  }
  auto metric = [&](size_t h) {
    if (report.n == 0) return Metric{};
    const double p = static_cast<double>(h) / static_cast<double>(report.n);
    return Metric{p, BernoulliSem(p, report.n)};
  };
  for (size_t s = 0; s < 3; ++s) report.slots[s] = metric(hits[s]);
  report.fact = metric(fact_hits);
  return report;
}

FrequencyLinker FrequencyLinker::Fit(std::span<const Alignment> train) {
  if (train.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training alignments");
  }
  FrequencyLinker linker;
  for (Slot s : kAllSlots) {
    // std::map iterates ids in ascending order, so the first max wins ties.
    std::map<std::string, size_t> counts;
    for (const Alignment &a : train) ++counts[FactSlot(a.fact, s)];
    const std::string *best = nullptr;
    size_t best_count = 0;
    for (const auto &[id, count] : counts) {
      if (count > best_count) {
        best = &id;
        best_count = count;
      }
    }
    FactSlot(linker.fact_, s) = *best;
  }
  return linker;
}

RandomLinker::RandomLinker(const KgStore &store, uint64_t seed)
    : store_(store), rng_(StreamSeed(seed, "random-linker")) {
  if (store.entity_ids().empty() || store.predicate_ids().empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "random linker needs entities and predicates");
  }
}

KgFact RandomLinker::LinkFact(const OieTriple &) {
  KgFact fact;
  for (Slot s : kAllSlots) {
    const auto &ids = store_.ids_of(SlotKind(s));
    FactSlot(fact, s) = ids[rng_.Uniform(ids.size())];
  }
  return fact;
}

EvalReport MacroScore(std::span<const EvalReport> reports) {
  if (reports.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no reports to average");
  }
  EvalReport macro;
  macro.split = "macro";
  macro.store = reports.front().store;
  const double k = static_cast<double>(reports.size());
  for (const EvalReport &r : reports) {
    macro.n += r.n;
    if (r.store != macro.store) macro.store = "mixed";
    for (size_t s = 0; s < 3; ++s) {
      macro.slots[s].value += r.slots[s].value / k;
      macro.slots[s].sem += r.slots[s].sem / k;
    }
    macro.fact.value += r.fact.value / k;
    macro.fact.sem += r.fact.sem / k;
  }
  return macro;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "records") return ReportFormat::kRecords;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown report format '" + std::string(name) + "'");
}

namespace {

constexpr const char *kMetricNames[] = {"subject", "relation", "object",
                                        "fact"};

const Metric &MetricAt(const EvalReport &r, size_t i) {
  return i < 3 ? r.slots[i] : r.fact;
}
Metric &MetricAt(EvalReport &r, size_t i) { return i < 3 ? r.slots[i] : r.fact; }

std::string TableHeader() {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-14s %-6s %7s  %-11s  %-11s  %-11s  %-11s\n",
                "Split", "Store", "N", "Subject", "Relation", "Object", "Fact");
  return buf;
}

std::string TableRow(const EvalReport &r) {
  std::string row;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-14s %-6s %7zu", r.split.c_str(),
                r.store.c_str(), r.n);
  row += buf;
  for (size_t i = 0; i < 4; ++i) {
    const Metric &m = MetricAt(r, i);
    std::snprintf(buf, sizeof(buf), "  %5.1f ± %-4.1f", 100.0 * m.value,
                  100.0 * m.sem);
    row += buf;
  }
  return row + "\n";
}

void RequireNonEmpty(const EvalReport &r) {
  if (r.n == 0) {
    throw Error(ErrorCode::kEmptyEvaluation,
                "report for split '" + r.split + "' has no samples");
  }
}

}  // namespace

std::string EmitReports(std::span<const EvalReport> reports,
                        ReportFormat format) {
  for (const EvalReport &r : reports) RequireNonEmpty(r);
  std::string out;
  if (format == ReportFormat::kTable) {
    out = TableHeader();
    for (const EvalReport &r : reports) out += TableRow(r);
    return out;
  }
  for (const EvalReport &r : reports) {
    for (size_t i = 0; i < 4; ++i) {
      const Metric &m = MetricAt(r, i);
      out += DumpRecord(Json{{"split", r.split},
                             {"store", r.store},
                             {"metric", kMetricNames[i]},
                             {"value", m.value},
                             {"sem", m.sem},
                             {"n", r.n}});
      out += '\n';
    }
  }
  return out;
}

std::string EmitReport(const EvalReport &report, ReportFormat format) {
  return EmitReports(std::span<const EvalReport>(&report, 1), format);
}

std::vector<EvalReport> ParseReportRecords(std::istream &in) {
  std::vector<EvalReport> reports;
  std::map<std::pair<std::string, std::string>, size_t> position;
  ForEachRecord(in, "report", [&](size_t line, const Json &rec) {
    RecordReader reader(rec, "report", line);
    const std::string split = reader.RequireString("split");
    const std::string store = reader.RequireString("store");
    const std::string metric = reader.RequireString("metric");
    size_t index = 4;
    for (size_t i = 0; i < 4; ++i) {
      if (metric == kMetricNames[i]) index = i;
    }
    if (index == 4) reader.Fail("unknown metric '" + metric + "'");
    auto [it, inserted] = position.emplace(std::pair{split, store},
                                           reports.size());
    if (inserted) {
      EvalReport r;
      r.split = split;
      r.store = store;
      reports.push_back(r);
    }
    EvalReport &r = reports[it->second];
    try {
      r.n = rec.at("n").get<size_t>();
      MetricAt(r, index) = {rec.at("value").get<double>(),
                            rec.at("sem").get<double>()};
    } catch (const Json::exception &e) {
      reader.Fail(e.what());
    }
  });
  return reports;
}

}  // namespace factlink
