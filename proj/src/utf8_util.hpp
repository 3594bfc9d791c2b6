#pragma once

#include <cstdint>
#include <string_view>

namespace emochain::detail {

struct Utf8Char {
  char32_t cp = 0;
  unsigned len = 1;   // bytes consumed
  bool valid = false;
};

// Decodes the code point starting at text[i]. Invalid sequences (including
// overlong encodings and surrogates) come back with valid=false and len=1 so
// the caller can skip a single byte and resynchronize.
inline Utf8Char decode_utf8(std::string_view text, std::size_t i) {
  Utf8Char out;
  const auto byte = [&](std::size_t k) -> std::uint8_t {
    return static_cast<std::uint8_t>(text[k]);
  };
  const std::uint8_t b0 = byte(i);
  if (b0 < 0x80) {
    out.cp = b0;
    out.len = 1;
    out.valid = true;
    return out;
  }
  unsigned need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    return out;  // continuation or invalid lead byte
  }
  if (i + need >= text.size()) return out;  // truncated sequence
  for (unsigned k = 1; k <= need; ++k) {
    const std::uint8_t b = byte(i + k);
    if ((b & 0xC0) != 0x80) return out;
    cp = (cp << 6) | (b & 0x3F);
  }
  // reject overlong forms, surrogates handled by caller policy
  static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[need] || cp > 0x10FFFF) return out;
  out.cp = cp;
  out.len = need + 1;
  out.valid = true;
  return out;
}

inline bool is_surrogate(char32_t cp) { return cp >= 0xD800 && cp <= 0xDFFF; }

// Scripts written without word separators; the tokenizer emits these one
// code point per token.
inline bool is_cjk_like(char32_t cp) {
  return (cp >= 0x3040 && cp <= 0x30FF) ||   // hiragana, katakana
         (cp >= 0x3400 && cp <= 0x4DBF) ||   // CJK ext A
         (cp >= 0x4E00 && cp <= 0x9FFF) ||   // CJK unified
         (cp >= 0xF900 && cp <= 0xFAFF) ||   // CJK compat
         (cp >= 0xAC00 && cp <= 0xD7AF);     // hangul syllables
}

inline void append_utf8(std::string& out, char32_t cp) {
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

}  // namespace emochain::detail
