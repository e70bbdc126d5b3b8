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

#include "cli/config.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "factlink/random.h"
#include "factlink/status.h"

namespace factlink::cli {

namespace {

std::string_view InductiveModeName(InductiveMode mode) {
  return mode == InductiveMode::kAnyEntityUnseen ? "any" : "all";
}

// Every key of `doc` must also exist in `schema`, recursively.
void CheckKeys(const Json &doc, const Json &schema, const std::string &prefix) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config section '" + prefix + "' must be an object");
  }
  for (const auto &[key, value] : doc.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (!schema.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + name + "'");
    }
    if (schema.at(key).is_object()) CheckKeys(value, schema.at(key), name);
  }
}

std::filesystem::path Resolve(const std::filesystem::path &base,
                              const std::string &value) {
  std::filesystem::path p(value);
  if (value.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

}  // namespace

Json ConfigToJson(const RunConfig &c) {
  const PrerankTrainConfig &p = c.preranker;
  const RerankTrainConfig &r = c.reranker;
  const QkvTrainConfig &q = c.ookg.qkv;
  return Json{
      {"seed", c.seed},
      {"resume", c.resume},
      {"paths",
       {{"kg_entries", c.paths.kg_entries.string()},
        {"kg_facts", c.paths.kg_facts.string()},
        {"oies", c.paths.oies.string()},
        {"pairs", c.paths.pairs.string()},
        {"output_dir", c.paths.output_dir.string()},
        {"encoder_params", c.paths.encoder_params.string()},
        {"embeddings", c.paths.embeddings.string()},
        {"thresholds", c.paths.thresholds.string()}}},
      {"benchmark",
       {{"min_frequency", c.benchmark.min_frequency},
        {"augment_aliases", c.benchmark.augment_aliases},
        {"case_fold", c.benchmark.surface.case_fold},
        {"inductive_mode", InductiveModeName(c.benchmark.inductive_mode)}}},
      {"encoder",
       {{"dim", c.encoder.dim},
        {"hidden", c.encoder.hidden},
        {"buckets", c.encoder.buckets}}},
      {"preranker",
       {{"epochs", p.epochs},
        {"learning_rate", p.learning_rate},
        {"weight_decay", p.weight_decay},
        {"batch_size", p.batch_size},
        {"temperature_init", p.temperature_init},
        {"min_temperature", p.min_temperature},
        {"global_negative_entities", p.global_neg_entities},
        {"global_negative_predicates", p.global_neg_predicates},
        {"with_context", p.with_context},
        {"optimizer", p.optimizer}}},
      {"reranker",
       {{"epochs", r.epochs},
        {"learning_rate", r.learning_rate},
        {"weight_decay", r.weight_decay},
        {"hard_negative_pool", r.hard_negative_pool},
        {"description_mask_prob", r.description_mask_prob},
        {"negatives_per_positive", r.negatives_per_positive},
        {"with_context", r.with_context}}},
      {"ookg",
       {{"epochs", q.epochs},
        {"learning_rate", q.learning_rate},
        {"weight_decay", q.weight_decay},
        {"keys", q.keys},
        {"gold_prob", q.gold_prob},
        {"with_context", q.with_context},
        {"grid_size", c.ookg.grid_size}}},
      {"evaluate",
       {{"facet", c.evaluate.facet},
        {"store", c.evaluate.store},
        {"with_context", c.evaluate.with_context},
        {"rerank_k", c.evaluate.rerank_k},
        {"detector", c.evaluate.detector},
        {"linker", c.evaluate.linker},
        {"format", c.evaluate.format}}},
  };
}

RunConfig ConfigFromJson(const Json &doc, RunConfig base,
                         const std::filesystem::path &base_dir) {
  Json merged = ConfigToJson(base);
  CheckKeys(doc, merged, "");
  Json resolved = doc;
  if (resolved.contains("paths")) {
    for (auto &[key, value] : resolved["paths"].items()) {
      if (!value.is_string()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "config key 'paths." + key + "' must be a string");
      }
      value = Resolve(base_dir, value.get<std::string>()).string();
    }
  }
  merged.merge_patch(resolved);

  RunConfig c;
  try {
    c.seed = merged.at("seed").get<uint64_t>();
    c.resume = merged.at("resume").get<bool>();
    const Json &paths = merged.at("paths");
    c.paths.kg_entries = paths.at("kg_entries").get<std::string>();
    c.paths.kg_facts = paths.at("kg_facts").get<std::string>();
    c.paths.oies = paths.at("oies").get<std::string>();
    c.paths.pairs = paths.at("pairs").get<std::string>();
    c.paths.output_dir = paths.at("output_dir").get<std::string>();
    c.paths.encoder_params = paths.at("encoder_params").get<std::string>();
    c.paths.embeddings = paths.at("embeddings").get<std::string>();
    c.paths.thresholds = paths.at("thresholds").get<std::string>();

    const Json &b = merged.at("benchmark");
    c.benchmark.min_frequency = b.at("min_frequency").get<size_t>();
    c.benchmark.augment_aliases = b.at("augment_aliases").get<bool>();
    c.benchmark.surface.case_fold = b.at("case_fold").get<bool>();
    c.benchmark.inductive_mode =
        ParseInductiveMode(b.at("inductive_mode").get<std::string>());

    const Json &e = merged.at("encoder");
    c.encoder.dim = e.at("dim").get<size_t>();
    c.encoder.hidden = e.at("hidden").get<size_t>();
    c.encoder.buckets = e.at("buckets").get<uint32_t>();

    const Json &p = merged.at("preranker");
    c.preranker.epochs = p.at("epochs").get<size_t>();
    c.preranker.learning_rate = p.at("learning_rate").get<double>();
    c.preranker.weight_decay = p.at("weight_decay").get<double>();
    c.preranker.batch_size = p.at("batch_size").get<size_t>();
    c.preranker.temperature_init = p.at("temperature_init").get<double>();
    c.preranker.min_temperature = p.at("min_temperature").get<double>();
    c.preranker.global_neg_entities =
        p.at("global_negative_entities").get<size_t>();
    c.preranker.global_neg_predicates =
        p.at("global_negative_predicates").get<size_t>();
    c.preranker.with_context = p.at("with_context").get<bool>();
    c.preranker.optimizer = p.at("optimizer").get<std::string>();

    const Json &r = merged.at("reranker");
    c.reranker.epochs = r.at("epochs").get<size_t>();
    c.reranker.learning_rate = r.at("learning_rate").get<double>();
    c.reranker.weight_decay = r.at("weight_decay").get<double>();
    c.reranker.hard_negative_pool = r.at("hard_negative_pool").get<size_t>();
    c.reranker.description_mask_prob =
        r.at("description_mask_prob").get<double>();
    c.reranker.negatives_per_positive =
        r.at("negatives_per_positive").get<size_t>();
    c.reranker.with_context = r.at("with_context").get<bool>();

    const Json &q = merged.at("ookg");
    c.ookg.qkv.epochs = q.at("epochs").get<size_t>();
    c.ookg.qkv.learning_rate = q.at("learning_rate").get<double>();
    c.ookg.qkv.weight_decay = q.at("weight_decay").get<double>();
    c.ookg.qkv.keys = q.at("keys").get<size_t>();
    c.ookg.qkv.gold_prob = q.at("gold_prob").get<double>();
    c.ookg.qkv.with_context = q.at("with_context").get<bool>();
    c.ookg.grid_size = q.at("grid_size").get<size_t>();

    const Json &v = merged.at("evaluate");
    c.evaluate.facet = v.at("facet").get<std::string>();
    c.evaluate.store = v.at("store").get<std::string>();
    c.evaluate.with_context = v.at("with_context").get<bool>();
    c.evaluate.rerank_k = v.at("rerank_k").get<size_t>();
    c.evaluate.detector = v.at("detector").get<std::string>();
    c.evaluate.linker = v.at("linker").get<std::string>();
    c.evaluate.format = v.at("format").get<std::string>();
  } catch (const Json::exception &ex) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad config value: ") + ex.what());
  }
  if (c.preranker.optimizer != "sgd") {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported optimizer '" + c.preranker.optimizer + "'");
  }
  if (c.encoder.dim == 0 || c.encoder.hidden == 0 ||
      c.encoder.buckets <= kReservedBuckets) {
    throw Error(ErrorCode::kInvalidArgument, "encoder shape must be positive");
  }
  PropagateSeed(c);
  return c;
}

RunConfig LoadConfigFile(const std::filesystem::path &path) {
  std::ifstream in = OpenForRead(path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception &ex) {
    throw Error(ErrorCode::kInvalidArgument,
                "config " + path.string() + ": " + ex.what());
  }
  return ConfigFromJson(doc, {}, path.parent_path());
}

void ApplyOverride(RunConfig &config, std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "override must be key=value: '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json doc = Json::object();
  Json *cursor = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> names;
  while (std::getline(parts, part, '.')) names.push_back(part);
  for (size_t i = 0; i + 1 < names.size(); ++i) cursor = &(*cursor)[names[i]];
  (*cursor)[names.back()] = value;
  config = ConfigFromJson(doc, config);
}

void PropagateSeed(RunConfig &c) {
  c.encoder.seed = c.seed;
  c.preranker.seed = c.seed;
  c.reranker.seed = c.seed;
  c.ookg.qkv.seed = c.seed;
}

std::string ConfigHash(const RunConfig &config) {
  Json doc = ConfigToJson(config);
  doc["paths"].erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(doc.dump())));
  return buf;
}

ArtifactHeader HeaderFor(const RunConfig &config) {
  return {ConfigHash(config), config.seed};
}

RunConfig ToyRunConfig(uint64_t seed) {
  RunConfig c;
  c.seed = seed;
  c.paths.kg_entries = "kg_entries.jsonl";
  c.paths.kg_facts = "kg_facts.jsonl";
  c.paths.oies = "oies.jsonl";
  c.paths.pairs = "pairs.jsonl";
  c.paths.output_dir = "run";
  c.encoder.dim = 64;
  c.encoder.hidden = 32;
  c.encoder.buckets = 1u << 15;
  c.preranker.epochs = 30;
  c.preranker.learning_rate = 0.5;
  c.preranker.global_neg_entities = 32;
  c.preranker.global_neg_predicates = 8;
  c.reranker.learning_rate = 0.05;
  PropagateSeed(c);
  return c;
}

void RequireExisting(
    std::initializer_list<const std::filesystem::path *> paths) {
  for (const std::filesystem::path *p : paths) {
    if (p->empty()) {
      throw Error(ErrorCode::kInvalidArgument, "required path not configured");
    }
    if (!std::filesystem::exists(*p)) {
      throw Error(ErrorCode::kIo, "no such file: " + p->string());
    }
  }
}

}  // namespace factlink::cli
