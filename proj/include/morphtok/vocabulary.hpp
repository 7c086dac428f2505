#pragma once

// Lexicon + BPE model with the final ID layout:
//   [specials | roots | affixes | BPE subwords | chars]

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "morphtok/bpe.hpp"
#include "morphtok/error.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/types.hpp"

namespace morphtok {

struct TokenInfo {
  TokenKind kind = TokenKind::Unknown;
  std::string_view surface;  // canonical root, first allomorph, subword, char or special surface
  const RootEntry* root = nullptr;
  const AffixGroup* affix = nullptr;
  SpecialLabel label = SpecialLabel::Unknown;
};

class Vocabulary {
 public:
  Vocabulary(Lexicon lexicon, BpeModel bpe) : lex_(std::move(lexicon)), bpe_(std::move(bpe)) {
    if (size() > kVocabularyBudget)
      throw data_error("vocabulary budget exceeded: " + std::to_string(size()) + " > " +
                       std::to_string(kVocabularyBudget) + " (lexicon " +
                       std::to_string(lex_.size()) + ", BPE " + std::to_string(bpe_.size()) + ")");
  }

  const Lexicon& lexicon() const { return lex_; }
  const BpeModel& bpe() const { return bpe_; }
  const PhonologyRules& rules() const { return lex_.rules(); }

  TokenId bpe_base() const { return lex_.bpe_base(); }
  TokenId char_base() const { return bpe_base() + static_cast<TokenId>(bpe_.size()); }
  std::size_t size() const { return char_base() + lex_.chars().size(); }

  TokenId special_id(SpecialLabel label) const { return lex_.special_id(label); }

  std::optional<TokenId> bpe_id(std::string_view subword) const {
    const auto i = bpe_.index_of(subword);
    if (!i) return std::nullopt;
    return bpe_base() + *i;
  }

  std::optional<TokenId> char_id(std::string_view ch) const {
    const auto i = lex_.char_index(ch);
    if (!i) return std::nullopt;
    return char_base() + static_cast<TokenId>(*i);
  }

  bool contains(TokenId id) const { return id < size(); }

  TokenKind kind_of(TokenId id) const {
    if (id < lex_.root_base()) return TokenKind::Special;
    if (id < lex_.affix_base()) return TokenKind::Root;
    if (id < bpe_base()) return TokenKind::Suffix;
    if (id < char_base()) return TokenKind::BpeSubword;
    if (id < size()) return TokenKind::Char;
    return TokenKind::Unknown;
  }

  // Throws data_error for IDs outside the layout.
  TokenInfo resolve(TokenId id) const {
    TokenInfo info;
    info.kind = kind_of(id);
    switch (info.kind) {
      case TokenKind::Special: {
        const auto& s = lex_.specials()[id];
        info.label = s.label;
        info.surface = special_surface(s.label);
        break;
      }
      case TokenKind::Root:
        info.root = &lex_.root_by_id(id);
        info.surface = info.root->canonical;
        break;
      case TokenKind::Suffix:
        info.affix = &lex_.affix_by_id(id);
        info.surface = info.affix->allomorphs.front();
        break;
      case TokenKind::BpeSubword:
        info.surface = bpe_.vocab()[id - bpe_base()];
        break;
      case TokenKind::Char:
        info.surface = lex_.chars()[id - char_base()];
        break;
      case TokenKind::Unknown:
        throw data_error("token id " + std::to_string(id) + " is outside the vocabulary (size " +
                         std::to_string(size()) + ")");
    }
    return info;
  }

 private:
  Lexicon lex_;
  BpeModel bpe_;
};

inline Vocabulary load_vocabulary(const std::string& lexicon_path, const std::string& bpe_path) {
  Lexicon lex = load_lexicon_file(lexicon_path);
  BpeModel bpe = bpe_path.empty() ? BpeModel{} : load_bpe_file(bpe_path);
  return Vocabulary(std::move(lex), std::move(bpe));
}

}  // namespace morphtok
