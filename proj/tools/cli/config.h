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

// Run configuration: one JSON document, every key overridable from the
// command line. Relative paths resolve against the config file's directory.

#ifndef FACTLINK_TOOLS_CONFIG_H_
#define FACTLINK_TOOLS_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factlink/encoder.h"
#include "factlink/jsonl.h"
#include "factlink/ookg.h"
#include "factlink/preranker.h"
#include "factlink/reranker.h"
#include "cli/pipeline.h"

namespace factlink::cli {

inline constexpr std::string_view kConfigEnvVar = "FACTLINK_CONFIG";

struct PathConfig {
  std::filesystem::path kg_entries;
  std::filesystem::path kg_facts;
  std::filesystem::path oies;
  std::filesystem::path pairs;
  std::filesystem::path output_dir = ".";
  // Empty: <output_dir>/encoder.flep.
  std::filesystem::path encoder_params;
  // Optional {key, vector} file; replaces the reference encoder when set.
  std::filesystem::path embeddings;
  // Optional calibrated thresholds; defaults are used when empty.
  std::filesystem::path thresholds;
};

struct EvaluateConfig {
  std::string facet = "transductive";
  std::string store = "BRKG";
  bool with_context = false;
  size_t rerank_k = 0;  // 0 disables reranking
  std::string detector;  // non-empty: out-of-KG evaluation
  std::string linker = "model";  // model, frequency or random
  std::string format = "table";
};

struct OokgConfig {
  QkvTrainConfig qkv;
  size_t grid_size = 200;
};

struct RunConfig {
  uint64_t seed = 0;
  PathConfig paths;
  BenchmarkOptions benchmark;
  EncoderConfig encoder;
  PrerankTrainConfig preranker;
  RerankTrainConfig reranker;
  OokgConfig ookg;
  EvaluateConfig evaluate;
  bool resume = false;

  std::filesystem::path Output(std::string_view name) const {
    return paths.output_dir / name;
  }
  std::filesystem::path EncoderPath() const {
    return paths.encoder_params.empty() ? Output("encoder.flep")
                                        : paths.encoder_params;
  }
};

// Canonical JSON form. Round-trips through ConfigFromJson.
Json ConfigToJson(const RunConfig &config);

// Applies the keys present in `doc` on top of `base`. Unknown keys raise
// InvalidArgument. Relative paths resolve against `base_dir`.
RunConfig ConfigFromJson(const Json &doc, RunConfig base = {},
                         const std::filesystem::path &base_dir = {});

RunConfig LoadConfigFile(const std::filesystem::path &path);

// "section.key=value" with a JSON or bare-string value.
void ApplyOverride(RunConfig &config, std::string_view assignment);

// Copies the master seed and shared switches into the stage configs.
void PropagateSeed(RunConfig &config);

// Hex FNV-1a of the canonical JSON without the output directory, so the
// same run written to two places carries the same hash.
std::string ConfigHash(const RunConfig &config);

ArtifactHeader HeaderFor(const RunConfig &config);

// Settings sized for the synthetic toy world: files named as WriteToyWorld
// names them, output under "run/", a small encoder and a larger step size.
RunConfig ToyRunConfig(uint64_t seed);

// Raises Io naming the first missing path among `paths`.
void RequireExisting(std::initializer_list<const std::filesystem::path *> paths);

}  // namespace factlink::cli

#endif  // FACTLINK_TOOLS_CONFIG_H_
