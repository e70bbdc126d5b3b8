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

#ifndef FACTLINK_TEXT_H_
#define FACTLINK_TEXT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace factlink {

// Reserved marker tokens. Slot strings containing any of them are rejected
// at ingestion.
inline constexpr std::string_view kSubjMarker = "<SUBJ>";
inline constexpr std::string_view kRelMarker = "<REL>";
inline constexpr std::string_view kObjMarker = "<OBJ>";
inline constexpr std::string_view kDescMarker = "<DESC>";
inline constexpr std::string_view kSentMarker = "<SENT>";
inline constexpr std::string_view kFactMarker = "<FACT>";
inline constexpr std::string_view kMaskMarker = "<mask>";

inline constexpr std::array<std::string_view, 7> kReservedMarkers = {
    kSubjMarker, kRelMarker,  kObjMarker, kDescMarker,
    kSentMarker, kFactMarker, kMaskMarker};

// Index of `token` in kReservedMarkers, if it is one.
std::optional<size_t> ReservedMarkerIndex(std::string_view token);

// First reserved marker occurring anywhere inside `text`.
std::optional<std::string_view> FindReservedMarker(std::string_view text);

// Options controlling surface-string equality.
struct SurfaceOptions {
  // Off by default: alignment requires identical text form.
  bool case_fold = false;
};

// Unicode NFC normalization, optionally followed by full case folding.
// Invalid UTF-8 is passed through unchanged.
std::string NormalizeSurface(std::string_view text,
                             const SurfaceOptions &options = {});

// Strips ASCII whitespace from both ends.
std::string_view TrimWhitespace(std::string_view text);

}  // namespace factlink

#endif  // FACTLINK_TEXT_H_
