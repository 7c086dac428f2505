#pragma once

// UTF-8 helpers plus the small slice of Unicode behaviour the tokenizer
// needs: NFC normalization, Turkish-aware case mapping and word/punctuation
// classification. ICU does the heavy lifting.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "morphtok/error.hpp"

namespace morphtok::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point starting at byte `pos` and advances `pos` past it.
// Ill-formed sequences yield U+FFFD and consume one byte.
inline char32_t next_cp(std::string_view s, std::size_t& pos) {
  const auto c0 = static_cast<unsigned char>(s[pos]);
  if (c0 < 0x80) {
    ++pos;
    return c0;
  }
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  auto i = static_cast<int32_t>(pos);
  const auto len = static_cast<int32_t>(s.size());
  UChar32 cp = 0;
  U8_NEXT(p, i, len, cp);
  pos = static_cast<std::size_t>(i);
  return cp < 0 ? kReplacement : static_cast<char32_t>(cp);
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

inline std::string to_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

inline std::string to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

inline std::u32string to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) out.push_back(next_cp(s, i));
  return out;
}

inline std::size_t cp_count(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

inline char32_t first_cp(std::string_view s) {
  if (s.empty()) return 0;
  std::size_t i = 0;
  return next_cp(s, i);
}

inline char32_t last_cp(std::string_view s) {
  if (s.empty()) return 0;
  std::size_t i = s.size() - 1;
  while (i > 0 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) --i;
  return next_cp(s, i);
}

// Byte offset is on a code point boundary (or at either end).
inline bool is_boundary(std::string_view s, std::size_t pos) {
  return pos == 0 || pos >= s.size() ||
         (static_cast<unsigned char>(s[pos]) & 0xC0) != 0x80;
}

inline bool is_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

// Canonical composition (NFC). ASCII input is returned unchanged.
inline std::string nfc(std::string_view s) {
  if (is_ascii(s)) return std::string(s);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw data_error("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(s);
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw data_error("NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

// Turkish case mapping: I <-> ı and İ <-> i, everything else simple mapping.
inline char32_t to_lower(char32_t cp) {
  if (cp < 0x80) {
    if (cp == U'I') return U'ı';
    return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
  }
  if (cp == U'İ') return U'i';
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

inline char32_t to_upper(char32_t cp) {
  if (cp < 0x80) {
    if (cp == U'i') return U'İ';
    return (cp >= U'a' && cp <= U'z') ? cp - 32 : cp;
  }
  if (cp == U'ı') return U'I';
  return static_cast<char32_t>(u_toupper(static_cast<UChar32>(cp)));
}

inline bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (std::size_t i = 0; i < s.size();) append_utf8(out, to_lower(next_cp(s, i)));
  return out;
}

inline std::string capitalize_first(std::string_view s) {
  if (s.empty()) return {};
  std::size_t i = 0;
  const char32_t first = next_cp(s, i);
  std::string out;
  out.reserve(s.size() + 1);
  append_utf8(out, to_upper(first));
  out.append(s.substr(i));
  return out;
}

// Letters, digits and combining marks make up words; everything else that is
// not a whitespace special becomes a single-character segment.
inline bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
           (cp >= U'0' && cp <= U'9');
  }
  const auto c = static_cast<UChar32>(cp);
  if (u_isalnum(c)) return true;
  return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

inline bool contains_whitespace(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    if (u_isUWhiteSpace(static_cast<UChar32>(next_cp(s, i)))) return true;
  }
  return false;
}

}  // namespace morphtok::unicode
