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

// Linking metrics, trivial baselines and report output.

#ifndef FACTLINK_EVALKIT_H_
#define FACTLINK_EVALKIT_H_

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "factlink/corpus.h"
#include "factlink/kg_store.h"
#include "factlink/random.h"

namespace factlink {

struct Metric {
  double value = 0.0;
  double sem = 0.0;

  bool operator==(const Metric &) const = default;
};

// sqrt(p (1 - p) / n); 0 for n == 0.
double BernoulliSem(double p, size_t n);

struct EvalReport {
  std::string split;
  std::string store = "BRKG";
  size_t n = 0;
  std::array<Metric, 3> slots{};
  Metric fact;

  const Metric &slot(Slot s) const { return slots[static_cast<size_t>(s)]; }
  bool operator==(const EvalReport &) const = default;
};

// Throws InvalidArgument when the lists differ in length.
EvalReport ScoreLinking(std::span<const KgFact> predictions,
                        std::span<const KgFact> gold, std::string split = "",
                        std::string store = "BRKG");

class Linker {
 public:
  virtual ~Linker() = default;
  virtual KgFact LinkFact(const OieTriple &triple) = 0;
};

// Links every slot to its most frequent training id (ties: smallest id).
class FrequencyLinker : public Linker {
 public:
  // Throws EmptyTrainingSet.
  static FrequencyLinker Fit(std::span<const Alignment> train);

  KgFact LinkFact(const OieTriple &) override { return fact_; }
  const KgFact &fact() const { return fact_; }

 private:
  KgFact fact_;
};

// Uniform per-slot draws from the store's inventory of the matching kind.
class RandomLinker : public Linker {
 public:
  // Throws InvalidArgument if the store lacks entities or predicates.
  RandomLinker(const KgStore &store, uint64_t seed);

  KgFact LinkFact(const OieTriple &) override;

 private:
  const KgStore &store_;
  Rng rng_;
};

// Unweighted mean of each metric (value and sem) across reports; n is the
// total count. Throws EmptyEvaluation on an empty list.
EvalReport MacroScore(std::span<const EvalReport> reports);

enum class ReportFormat { kTable, kRecords };
ReportFormat ParseReportFormat(std::string_view name);

// Table mode: percentages with one decimal, columns
//   Split  Store  N  Subject  Relation  Object  Fact
// Records mode: one {split, store, metric, value, sem, n} line per metric.
// Throws EmptyEvaluation for a report with n == 0.
std::string EmitReport(const EvalReport &report, ReportFormat format);
std::string EmitReports(std::span<const EvalReport> reports,
                        ReportFormat format);

// Inverse of records mode; reports are returned in first-seen order.
std::vector<EvalReport> ParseReportRecords(std::istream &in);

}  // namespace factlink

#endif  // FACTLINK_EVALKIT_H_
