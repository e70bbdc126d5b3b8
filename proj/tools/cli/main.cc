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

// factlink: benchmark construction, training and evaluation driver.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/config.h"
#include "factlink/status.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

int ExitFor(factlink::ErrorCode code) {
  using factlink::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return kUsage;
    case ErrorCode::kNumericFailure:
      return kNumeric;
    default:
      return kData;
  }
}

}  // namespace

int main(int argc, char **argv) {
  using namespace factlink::cli;

  CLI::App app{"OIE to KG fact linking: benchmark builder and linker"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  std::optional<std::string> output_dir, store, facet, detector, format, linker;
  std::optional<size_t> rerank_k;
  bool with_context = false, resume = false;

  app.add_option("-c,--config", config_path, "run config (JSON)")
      ->envname(std::string(kConfigEnvVar));
  app.add_option("--set", overrides, "override a config key: section.key=value");
  app.add_option("--seed", seed, "master seed");
  app.add_option("-o,--output-dir", output_dir, "artifact directory");
  app.add_option("--store", store, "BRKG or Large");
  app.add_option("--facet", facet,
                 "transductive, inductive, polysemous, out_of_kg or all");
  app.add_option("--detector", detector,
                 "confidence, entropy, qkv, coin, constant or oracle");
  app.add_option("--format", format, "table or records");
  app.add_option("--linker", linker, "model, frequency or random");
  app.add_option("--rerank-k", rerank_k, "rerank depth per slot (0: off)");
  app.add_flag("--with-context", with_context, "append the sentence to OIEs");
  app.add_flag("--resume", resume, "continue from existing encoder params");

  std::string stage;
  CLI::App *build = app.add_subcommand("build-benchmark",
                                       "align, augment, split, write stats");
  CLI::App *split = app.add_subcommand("split", "recompute split files");
  CLI::App *train_pre = app.add_subcommand("train-preranker", "InfoNCE training");
  CLI::App *train_re = app.add_subcommand("train-reranker", "cross scorer");
  CLI::App *train_ookg =
      app.add_subcommand("train-ookg", "QKV head and threshold calibration");
  CLI::App *train = app.add_subcommand("train", "train one stage");
  train->add_option("--stage", stage, "preranker, reranker or ookg")
      ->required();
  CLI::App *index = app.add_subcommand("index", "write embedding indices");
  CLI::App *link = app.add_subcommand("link", "link a split");
  CLI::App *evaluate = app.add_subcommand("evaluate", "score a split");
  CLI::App *detect = app.add_subcommand("detect", "out-of-KG decisions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = LoadConfigFile(config_path);
    for (const std::string &o : overrides) ApplyOverride(config, o);
    if (seed) config.seed = *seed;
    if (output_dir) config.paths.output_dir = *output_dir;
    if (store) config.evaluate.store = *store;
    if (facet) config.evaluate.facet = *facet;
    if (detector) config.evaluate.detector = *detector;
    if (format) config.evaluate.format = *format;
    if (linker) config.evaluate.linker = *linker;
    if (rerank_k) config.evaluate.rerank_k = *rerank_k;
    if (with_context) config.evaluate.with_context = true;
    if (resume) config.resume = true;
    PropagateSeed(config);

    std::ostream &log = std::cerr;
    if (*build) CmdBuildBenchmark(config, log);
    if (*split) CmdSplit(config, log);
    if (*train_pre) CmdTrainPreranker(config, log);
    if (*train_re) CmdTrainReranker(config, log);
    if (*train_ookg) CmdTrainOokg(config, log);
    if (*train) CmdTrain(config, stage, log);
    if (*index) CmdIndex(config, log);
    if (*link) CmdLink(config, log);
    if (*evaluate) CmdEvaluate(config, std::cout, log);
    if (*detect) CmdDetect(config, std::cout, log);
  } catch (const factlink::Error &e) {
    std::cerr << "factlink: " << e.what() << "\n";
    return ExitFor(e.code());
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "factlink: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}
