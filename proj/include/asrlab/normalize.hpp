#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <json.hpp>

namespace asrlab {

// Post-decoding text clean-up rules. Defaults are the conservative reading:
// lowercase, strip common punctuation, collapse whitespace, cap character
// runs at two, NFC.
struct NormalizationConfig {
  bool lowercase = true;
  bool strip_punct = true;
  // UTF-8 string; every code point in it is a punctuation mark to strip.
  std::string punct_set = ".,;:!?¿¡\"'()[]«»";
  bool collapse_spaces = true;
  std::size_t max_char_run = 2;
  bool unicode_nfc = true;

  // Every rule disabled: normalize() is then the identity.
  static NormalizationConfig identity();

  void validate() const;
};

void to_json(nlohmann::json& j, const NormalizationConfig& c);
void from_json(const nlohmann::json& j, NormalizationConfig& c);

NormalizationConfig load_normalization_config(const std::string& path);

// Idempotent: normalize(normalize(x), c) == normalize(x, c). An apostrophe
// with a letter on both sides survives strip_punct.
std::string normalize(std::string_view text, const NormalizationConfig& cfg = {});

}  // namespace asrlab
