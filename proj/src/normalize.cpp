#include "asrlab/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "asrlab/error.hpp"
#include "asrlab/text.hpp"

namespace asrlab {

NormalizationConfig NormalizationConfig::identity() {
  NormalizationConfig c;
  c.lowercase = false;
  c.strip_punct = false;
  c.collapse_spaces = false;
  c.max_char_run = std::numeric_limits<std::size_t>::max();
  c.unicode_nfc = false;
  return c;
}

void NormalizationConfig::validate() const {
  if (max_char_run < 1) throw InvalidArgument("max_char_run must be >= 1");
}

void to_json(nlohmann::json& j, const NormalizationConfig& c) {
  j = nlohmann::json{{"lowercase", c.lowercase},
                     {"strip_punct", c.strip_punct},
                     {"punct_set", c.punct_set},
                     {"collapse_spaces", c.collapse_spaces},
                     {"max_char_run", c.max_char_run},
                     {"unicode_nfc", c.unicode_nfc}};
}

void from_json(const nlohmann::json& j, NormalizationConfig& c) {
  // Missing keys keep their defaults so configs can override a single rule.
  c = NormalizationConfig{};
  if (j.contains("lowercase")) j.at("lowercase").get_to(c.lowercase);
  if (j.contains("strip_punct")) j.at("strip_punct").get_to(c.strip_punct);
  if (j.contains("punct_set")) j.at("punct_set").get_to(c.punct_set);
  if (j.contains("collapse_spaces")) j.at("collapse_spaces").get_to(c.collapse_spaces);
  if (j.contains("max_char_run")) j.at("max_char_run").get_to(c.max_char_run);
  if (j.contains("unicode_nfc")) j.at("unicode_nfc").get_to(c.unicode_nfc);
  c.validate();
}

NormalizationConfig load_normalization_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open normalization config " + path);
  try {
    return nlohmann::json::parse(in).get<NormalizationConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("normalization config " + path + ": " + e.what());
  }
}

namespace {

std::string nfc(const std::string& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = n->normalize(icu::UnicodeString::fromUTF8(s), status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");
  std::string r;
  return out.toUTF8String(r);
}

std::string lower(const std::string& s) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(s);
  u.toLower(icu::Locale::getRoot());
  std::string r;
  return u.toUTF8String(r);
}

bool is_mark(char32_t c) {
  const auto t = u_charType(static_cast<UChar32>(c));
  return t == U_NON_SPACING_MARK || t == U_ENCLOSING_MARK || t == U_COMBINING_SPACING_MARK;
}

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’' || c == U'ʼ'; }

// Letter before position i, looking through combining marks.
bool letter_before(const std::u32string& s, std::size_t i) {
  while (i > 0) {
    --i;
    if (!is_mark(s[i])) return is_letter(s[i]);
  }
  return false;
}

bool letter_after(const std::u32string& s, std::size_t i) {
  return i + 1 < s.size() && is_letter(s[i + 1]);
}

std::string one_pass(std::string_view input, const NormalizationConfig& cfg,
                     const std::u32string& punct) {
  std::string s(input);
  if (cfg.unicode_nfc) s = nfc(s);
  if (cfg.lowercase) {
    s = lower(s);
    if (cfg.unicode_nfc) s = nfc(s);
  }
  std::u32string cps = text::to_u32(s);

  if (cfg.strip_punct && !punct.empty()) {
    std::u32string kept;
    kept.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const char32_t c = cps[i];
      const bool listed = punct.find(c) != std::u32string::npos;
      if (listed && !(is_apostrophe(c) && letter_before(cps, i) && letter_after(cps, i))) continue;
      kept.push_back(c);
    }
    cps.swap(kept);
  }

  if (cfg.max_char_run < cps.size()) {
    std::u32string kept;
    kept.reserve(cps.size());
    std::size_t run = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      run = (i > 0 && cps[i] == cps[i - 1]) ? run + 1 : 1;
      if (run <= cfg.max_char_run) kept.push_back(cps[i]);
    }
    cps.swap(kept);
  }

  if (cfg.collapse_spaces) {
    std::u32string kept;
    kept.reserve(cps.size());
    bool pending = false;
    for (char32_t c : cps) {
      if (is_space(c)) {
        pending = !kept.empty();
        continue;
      }
      if (pending) kept.push_back(U' ');
      pending = false;
      kept.push_back(c);
    }
    cps.swap(kept);
  }
  return text::to_utf8(cps);
}

}  // namespace

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  cfg.validate();
  const std::u32string punct = text::to_u32(cfg.punct_set);
  // Removing characters can expose new compositions or new runs, so the
  // rule set is applied until it reaches a fixed point.
  std::string cur = one_pass(text, cfg, punct);
  for (int i = 0; i < 16; ++i) {
    std::string next = one_pass(cur, cfg, punct);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace asrlab
