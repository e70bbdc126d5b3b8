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

#include "factlink/jsonl.h"

#include <istream>

#include "factlink/status.h"
#include "factlink/text.h"

namespace factlink {

Json HeaderRecord(const ArtifactHeader &header) {
  Json body = {{"tool", kToolName},
               {"version", kToolVersion},
               {"config_hash", header.config_hash},
               {"seed", header.seed}};
  return Json{{"header", body}};
}

bool IsHeaderRecord(const Json &record) {
  return record.is_object() && record.size() == 1 && record.contains("header");
}

void ForEachRecord(std::istream &in, std::string_view source,
                   const std::function<void(size_t, const Json &)> &fn) {
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimWhitespace(line).empty()) continue;
    Json record = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      throw Error(ErrorCode::kMalformedRecord,
                  std::string(source) + ":" + std::to_string(line_number) +
                      ": not a JSON object");
    }
    if (IsHeaderRecord(record)) continue;
    fn(line_number, record);
  }
}

std::optional<ArtifactHeader> ReadHeader(std::istream &in) {
  std::string line;
  while (std::getline(in, line)) {
    if (TrimWhitespace(line).empty()) continue;
    Json record = Json::parse(line, nullptr, false);
    if (record.is_discarded() || !IsHeaderRecord(record)) return std::nullopt;
    const Json &body = record["header"];
    ArtifactHeader header;
    header.config_hash = body.value("config_hash", "");
    header.seed = body.value("seed", uint64_t{0});
    return header;
  }
  return std::nullopt;
}

std::ifstream OpenForRead(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open for reading: " + path.string());
  }
  return in;
}

std::ofstream OpenForWrite(const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open for writing: " + path.string());
  }
  return out;
}

std::string DumpRecord(const Json &record) {
  return record.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string RecordReader::RequireString(std::string_view key) const {
  auto it = record_.find(key);
  if (it == record_.end() || !it->is_string()) {
    Fail("missing string field '" + std::string(key) + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> RecordReader::OptionalString(
    std::string_view key) const {
  auto it = record_.find(key);
  if (it == record_.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) Fail("field '" + std::string(key) + "' not a string");
  return it->get<std::string>();
}

std::vector<std::string> RecordReader::StringList(std::string_view key) const {
  std::vector<std::string> out;
  auto it = record_.find(key);
  if (it == record_.end() || it->is_null()) return out;
  if (!it->is_array()) Fail("field '" + std::string(key) + "' not a list");
  for (const Json &item : *it) {
    if (!item.is_string()) {
      Fail("field '" + std::string(key) + "' has a non-string element");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool RecordReader::OptionalBool(std::string_view key, bool fallback) const {
  auto it = record_.find(key);
  if (it == record_.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) Fail("field '" + std::string(key) + "' not a bool");
  return it->get<bool>();
}

void RecordReader::Fail(const std::string &message) const {
  throw Error(ErrorCode::kMalformedRecord,
              std::string(source_) + ":" + std::to_string(line_) + ": " +
                  message);
}

}  // namespace factlink
