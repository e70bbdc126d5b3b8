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

// Line-delimited JSON record streams. Every artifact written by the tools
// starts with a header record {"header": {...}}; readers skip it.

#ifndef FACTLINK_JSONL_H_
#define FACTLINK_JSONL_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace factlink {

using Json = nlohmann::json;

inline constexpr std::string_view kToolName = "factlink";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct ArtifactHeader {
  std::string config_hash;
  uint64_t seed = 0;
};

Json HeaderRecord(const ArtifactHeader &header);
bool IsHeaderRecord(const Json &record);

// Calls `fn(line_number, record)` for every non-blank, non-header line.
// Line numbers are 1-based. Unparseable lines raise MalformedRecord naming
// `source` and the line.
void ForEachRecord(std::istream &in, std::string_view source,
                   const std::function<void(size_t, const Json &)> &fn);

// Reads the header record of a stream, if its first record is one.
std::optional<ArtifactHeader> ReadHeader(std::istream &in);

std::ifstream OpenForRead(const std::filesystem::path &path);
std::ofstream OpenForWrite(const std::filesystem::path &path);

// Serializes one record on a single line (no trailing newline).
std::string DumpRecord(const Json &record);

// Field accessors that raise MalformedRecord with the source location.
class RecordReader {
 public:
  RecordReader(const Json &record, std::string_view source, size_t line)
      : record_(record), source_(source), line_(line) {}

  std::string RequireString(std::string_view key) const;
  std::optional<std::string> OptionalString(std::string_view key) const;
  std::vector<std::string> StringList(std::string_view key) const;
  bool OptionalBool(std::string_view key, bool fallback) const;

  [[noreturn]] void Fail(const std::string &message) const;

  size_t line() const { return line_; }

 private:
  const Json &record_;
  std::string_view source_;
  size_t line_;
};

}  // namespace factlink

#endif  // FACTLINK_JSONL_H_
