#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphtok {

using TokenId = std::uint32_t;

// Vocabulary-size budget shared by lexicon, BPE subwords and characters.
inline constexpr std::size_t kVocabularyBudget = 32768;

enum class TokenKind : std::uint8_t { Special, Root, Suffix, BpeSubword, Char, Unknown };

enum class SpecialLabel : std::uint8_t { Uppercase, Space, Newline, Tab, Unknown };

inline constexpr std::array<SpecialLabel, 5> kAllSpecialLabels = {
    SpecialLabel::Uppercase, SpecialLabel::Space, SpecialLabel::Newline,
    SpecialLabel::Tab, SpecialLabel::Unknown};

inline constexpr std::string_view label_name(SpecialLabel label) {
  switch (label) {
    case SpecialLabel::Uppercase: return "uppercase";
    case SpecialLabel::Space: return "space";
    case SpecialLabel::Newline: return "newline";
    case SpecialLabel::Tab: return "tab";
    case SpecialLabel::Unknown: return "unknown";
  }
  return "";
}

inline std::optional<SpecialLabel> parse_label(std::string_view name) {
  for (SpecialLabel label : kAllSpecialLabels)
    if (label_name(label) == name) return label;
  return std::nullopt;
}

// Printable form used in surface dumps: "<space>", "<uppercase>", "<unk>".
inline std::string_view special_surface(SpecialLabel label) {
  switch (label) {
    case SpecialLabel::Uppercase: return "<uppercase>";
    case SpecialLabel::Space: return "<space>";
    case SpecialLabel::Newline: return "<newline>";
    case SpecialLabel::Tab: return "<tab>";
    case SpecialLabel::Unknown: return "<unk>";
  }
  return "";
}

inline std::optional<SpecialLabel> parse_special_surface(std::string_view surface) {
  for (SpecialLabel label : kAllSpecialLabels)
    if (special_surface(label) == surface) return label;
  return std::nullopt;
}

// Text a special expands to when decoding. Uppercase expands to nothing and
// capitalizes the next word instead.
inline std::string_view special_text(SpecialLabel label) {
  switch (label) {
    case SpecialLabel::Space: return " ";
    case SpecialLabel::Newline: return "\n";
    case SpecialLabel::Tab: return "\t";
    case SpecialLabel::Unknown: return "<unk>";
    case SpecialLabel::Uppercase: return "";
  }
  return "";
}

inline std::string_view kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Special: return "special";
    case TokenKind::Root: return "root";
    case TokenKind::Suffix: return "suffix";
    case TokenKind::BpeSubword: return "bpe";
    case TokenKind::Char: return "char";
    case TokenKind::Unknown: return "unknown";
  }
  return "";
}

struct SpecialToken {
  TokenId id = 0;
  SpecialLabel label = SpecialLabel::Unknown;
};

// A root with its phonological alternants. variants[0] is always canonical.
struct RootEntry {
  TokenId id = 0;
  std::string canonical;
  std::vector<std::string> variants;
  bool compound = false;
  bool functional = false;
  bool haplology = false;  // final narrow vowel drops before a vowel (alın -> aln)
  bool hiatus = false;     // final a/e narrows before a hiatus trigger (oyna -> oynu)

  bool has_variant(std::string_view surface) const {
    for (const auto& v : variants)
      if (v == surface) return true;
    return false;
  }
};

// Allomorphs sharing one grammatical function and one id.
struct AffixGroup {
  TokenId id = 0;
  std::string function;
  std::vector<std::string> allomorphs;
  // Per-allomorph final-softening role, filled in at load (see phonology.hpp).
  std::vector<std::int8_t> soft_role;

  bool has_allomorph(std::string_view surface) const {
    for (const auto& a : allomorphs)
      if (a == surface) return true;
    return false;
  }
};

}  // namespace morphtok
