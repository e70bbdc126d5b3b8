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

#include "factlink/text.h"

#include <unicode/utf8.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utypes.h>

namespace factlink {

std::optional<size_t> ReservedMarkerIndex(std::string_view token) {
  for (size_t i = 0; i < kReservedMarkers.size(); ++i) {
    if (token == kReservedMarkers[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::string_view> FindReservedMarker(std::string_view text) {
  for (std::string_view marker : kReservedMarkers) {
    if (text.find(marker) != std::string_view::npos) return marker;
  }
  return std::nullopt;
}

std::string NormalizeSurface(std::string_view text,
                             const SurfaceOptions &options) {
  bool ascii = true;
  for (unsigned char c : text) {
    if (c >= 0x80) {
      ascii = false;
      break;
    }
  }
  // ASCII is already in NFC.
  if (ascii) {
    std::string out(text);
    if (options.case_fold) {
      for (char &c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
    return out;
  }

  for (int32_t i = 0, n = static_cast<int32_t>(text.size()); i < n;) {
    UChar32 c;
    U8_NEXT(text.data(), i, n, c);
    if (c < 0) return std::string(text);
  }

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(text);
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (source.isBogus()) return std::string(text);
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) return std::string(text);
  if (options.case_fold) {
    normalized.foldCase();
    // Folding can denormalize (e.g. U+0130); renormalize.
    normalized = nfc->normalize(normalized, status);
    if (U_FAILURE(status)) return std::string(text);
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string_view TrimWhitespace(std::string_view text) {
  constexpr std::string_view kSpace = " \t\n\r\f\v";
  const size_t begin = text.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const size_t end = text.find_last_not_of(kSpace);
  return text.substr(begin, end - begin + 1);
}

}  // namespace factlink
