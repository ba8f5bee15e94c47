#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace asrlab::text {

// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences decode to
// U+FFFD, one replacement per maximal ill-formed subpart.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

// Splits on runs of ASCII whitespace; leading and trailing whitespace never
// yields empty tokens.
std::vector<std::string> split_words(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string_view> split_fields(std::string_view line, char delim);

}  // namespace asrlab::text
