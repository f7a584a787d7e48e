#include "unicode.hpp"

namespace stressdetect::detail {
namespace {

bool continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

}  // namespace

Decoded decode_utf8(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) {
    return {lead, 1, true};
  }
  std::size_t length = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
    min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
    min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
    min = 0x10000;
  } else {
    return {0xFFFD, 1, false};
  }
  if (pos + length > text.size()) {
    return {0xFFFD, 1, false};
  }
  for (std::size_t i = 1; i < length; ++i) {
    const auto c = static_cast<unsigned char>(text[pos + i]);
    if (!continuation(c)) {
      return {0xFFFD, 1, false};
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || in(cp, 0xD800, 0xDFFF)) {
    return {0xFFFD, 1, false};
  }
  return {cp, length, true};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Covers ASCII, Latin-1, Latin Extended-A, Latin Extended Additional, Greek,
// Cyrillic and fullwidth Latin. Every target lies outside the mapped domain,
// which keeps the mapping idempotent.
char32_t simple_lowercase(char32_t cp) {
  if (in(cp, 'A', 'Z')) return cp + 32;
  if (cp < 0xC0) return cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 32;
  if (in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) return (cp % 2 == 0) ? cp + 1 : cp;
  if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (in(cp, 0x391, 0x3A1) || in(cp, 0x3A3, 0x3AB)) return cp + 32;
  if (in(cp, 0x400, 0x40F)) return cp + 80;
  if (in(cp, 0x410, 0x42F)) return cp + 32;
  if (in(cp, 0x460, 0x481) || in(cp, 0x48A, 0x4BF)) return (cp % 2 == 0) ? cp + 1 : cp;
  if (in(cp, 0x1E00, 0x1E95)) return (cp % 2 == 0) ? cp + 1 : cp;
  if (in(cp, 0xFF21, 0xFF3A)) return cp + 32;
  return cp;
}

bool is_letter(char32_t cp) {
  if (in(cp, 'a', 'z') || in(cp, 'A', 'Z')) return true;
  if (cp < 0x80) return false;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (in(cp, 0xC0, 0x2AF)) return cp != 0xD7 && cp != 0xF7;
  if (in(cp, 0x370, 0x3FF)) return cp != 0x37E && cp != 0x387 && cp != 0x375;
  if (in(cp, 0x400, 0x52F)) return !in(cp, 0x482, 0x489);
  if (in(cp, 0x531, 0x556) || in(cp, 0x561, 0x587)) return true;
  if (in(cp, 0x5D0, 0x5EA)) return true;
  if (in(cp, 0x620, 0x64A)) return true;
  if (in(cp, 0x900, 0xDFF)) return true;
  if (in(cp, 0xE01, 0xE30)) return true;
  if (in(cp, 0x1E00, 0x1FFF)) return true;
  if (in(cp, 0x3041, 0x30FF)) return cp != 0x30FB;
  if (in(cp, 0x3400, 0x4DBF) || in(cp, 0x4E00, 0x9FFF)) return true;
  if (in(cp, 0xAC00, 0xD7A3)) return true;
  if (in(cp, 0xFF21, 0xFF3A) || in(cp, 0xFF41, 0xFF5A)) return true;
  return false;
}

bool is_digit(char32_t cp) { return in(cp, '0', '9'); }

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\v':
    case '\f':
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return in(cp, 0x2000, 0x200A);
  }
}

}  // namespace stressdetect::detail
