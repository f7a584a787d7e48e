#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stressdetect::detail {

struct Decoded {
  char32_t code_point;
  std::size_t length;
  bool valid;
};

// Decodes one UTF-8 sequence at `pos`. Malformed input yields valid == false
// with length 1 so callers can resynchronise byte by byte.
Decoded decode_utf8(std::string_view text, std::size_t pos);
void append_utf8(std::string& out, char32_t cp);

char32_t simple_lowercase(char32_t cp);
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);

}  // namespace stressdetect::detail
