#pragma once

// IDs -> text. Roots and suffixes are realized against their neighbours
// (harmony, assimilation, devoicing, haplology, hiatus), subwords and chars
// are copied verbatim, specials restore whitespace and capitalization.
// The encoder accepts a segmentation only if realize_word() reproduces the
// word, so both directions share this code.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphtok/error.hpp"
#include "morphtok/phonology.hpp"
#include "morphtok/types.hpp"
#include "morphtok/unicode.hpp"
#include "morphtok/vocabulary.hpp"

namespace morphtok {

namespace detail {

// Context a morpheme sees on its right: the tentative form of a following
// suffix, the canonical form of a following root, or the literal surface of
// a following subword or character.
inline std::string_view right_context(const TokenInfo& next, const Tail& tail_before_next,
                                      const PhonologyRules& rules) {
  switch (next.kind) {
    case TokenKind::Suffix: return realize_suffix(*next.affix, tail_before_next, rules);
    case TokenKind::Root: return next.root->canonical;
    default: return next.surface;
  }
}

}  // namespace detail

// Realizes a run of word-internal tokens (resolved beforehand). Appends the
// text to `out` and, if `pieces` is given, one view per token.
inline void realize_run(std::span<const TokenInfo> run, const PhonologyRules& rules,
                        std::string& out, std::vector<std::string_view>* pieces = nullptr) {
  Tail tail;
  for (std::size_t i = 0; i < run.size(); ++i) {
    const TokenInfo& cur = run[i];
    const bool has_next = i + 1 < run.size();
    std::string_view piece;
    switch (cur.kind) {
      case TokenKind::Root: {
        std::string_view next;
        if (has_next) {
          Tail t = tail;
          t.extend(cur.root->canonical, rules);
          next = detail::right_context(run[i + 1], t, rules);
        }
        piece = realize_root(*cur.root, next, rules);
        break;
      }
      case TokenKind::Suffix: {
        std::string_view next;
        if (has_next) {
          Tail t = tail;
          t.extend(realize_suffix(*cur.affix, tail, rules), rules);
          next = detail::right_context(run[i + 1], t, rules);
        }
        piece = realize_suffix(*cur.affix, tail, rules, next);
        break;
      }
      default:
        piece = cur.surface;
        break;
    }
    tail.extend(piece, rules);
    out.append(piece);
    if (pieces) pieces->push_back(piece);
  }
}

inline std::string realize_word(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::vector<TokenInfo> run;
  run.reserve(ids.size());
  for (TokenId id : ids) run.push_back(vocab.resolve(id));
  std::string out;
  realize_run(run, vocab.rules(), out);
  return out;
}

namespace detail {

inline bool joins_word(const TokenInfo& info) {
  switch (info.kind) {
    case TokenKind::Root:
    case TokenKind::Suffix:
    case TokenKind::BpeSubword: return true;
    case TokenKind::Char: return unicode::is_word_char(unicode::first_cp(info.surface));
    default: return false;
  }
}

inline std::vector<TokenInfo> resolve_all(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::vector<TokenInfo> infos;
  infos.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!vocab.contains(ids[i]))
      throw data_error("token " + std::to_string(i) + ": id " + std::to_string(ids[i]) +
                       " does not resolve (vocabulary size " + std::to_string(vocab.size()) + ")");
    infos.push_back(vocab.resolve(ids[i]));
  }
  return infos;
}

// Walks resolved tokens, calling on_special(info), on_char(info) and
// on_word(run, pieces) in order.
template <class Special, class Char, class Word>
void walk(const std::vector<TokenInfo>& infos, const PhonologyRules& rules, Special&& on_special,
          Char&& on_char, Word&& on_word) {
  std::string scratch;
  std::vector<std::string_view> pieces;
  for (std::size_t i = 0; i < infos.size();) {
    const TokenInfo& info = infos[i];
    if (info.kind == TokenKind::Special) {
      on_special(info);
      ++i;
    } else if (!joins_word(info)) {
      on_char(info);
      ++i;
    } else {
      std::size_t j = i;
      while (j < infos.size() && joins_word(infos[j])) ++j;
      scratch.clear();
      pieces.clear();
      realize_run(std::span<const TokenInfo>(infos.data() + i, j - i), rules, scratch, &pieces);
      on_word(scratch, pieces);
      i = j;
    }
  }
}

}  // namespace detail

// Reconstructs text. An uppercase special capitalizes the first letter of
// the next word; the unknown special becomes "<unk>".
inline std::string decode(std::span<const TokenId> ids, const Vocabulary& vocab) {
  const auto infos = detail::resolve_all(ids, vocab);
  std::string out;
  bool capitalize = false;
  detail::walk(
      infos, vocab.rules(),
      [&](const TokenInfo& s) {
        if (s.label == SpecialLabel::Uppercase)
          capitalize = true;
        else
          out.append(special_text(s.label));
      },
      [&](const TokenInfo& c) { out.append(c.surface); },
      [&](const std::string& word, const std::vector<std::string_view>&) {
        if (capitalize) {
          out.append(unicode::capitalize_first(word));
          capitalize = false;
        } else {
          out.append(word);
        }
      });
  return out;
}

// Printable surface per token: realized morphemes ("kitab", "lar"), subwords,
// chars, and "<space>"-style names for specials.
inline std::vector<std::string> token_surfaces(std::span<const TokenId> ids,
                                               const Vocabulary& vocab) {
  const auto infos = detail::resolve_all(ids, vocab);
  std::vector<std::string> out;
  out.reserve(ids.size());
  detail::walk(
      infos, vocab.rules(), [&](const TokenInfo& s) { out.emplace_back(s.surface); },
      [&](const TokenInfo& c) { out.emplace_back(c.surface); },
      [&](const std::string&, const std::vector<std::string_view>& pieces) {
        for (auto p : pieces) out.emplace_back(p);
      });
  return out;
}

// Maps printable surfaces back to IDs. A token that starts a word resolves
// as root, then subword, then char; a later token in the same word resolves
// as suffix (lowest group ID), then root, subword, char.
inline std::vector<TokenId> parse_surfaces(std::span<const std::string> surfaces,
                                           const Vocabulary& vocab) {
  const Lexicon& lex = vocab.lexicon();
  std::vector<TokenId> ids;
  ids.reserve(surfaces.size());
  bool in_word = false;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const std::string& s = surfaces[i];
    if (auto label = parse_special_surface(s)) {
      ids.push_back(vocab.special_id(*label));
      in_word = false;
      continue;
    }
    std::optional<TokenId> id;
    if (in_word) {
      const auto groups = lex.affixes_with(s);
      if (!groups.empty()) id = groups.front()->id;
    }
    if (!id) id = lex.normalize_root_id(s);
    if (!id) id = vocab.bpe_id(s);
    if (!id) id = vocab.char_id(s);
    if (!id) throw data_error("token " + std::to_string(i) + ": unknown surface '" + s + "'");
    ids.push_back(*id);
    in_word = detail::joins_word(vocab.resolve(*id));
  }
  return ids;
}

// Decodes printable surfaces by concatenating them as written (the encoder
// prints realized forms), applying specials and capitalization. Every
// surface must belong to the vocabulary.
inline std::string decode_surfaces(std::span<const std::string> surfaces, const Vocabulary& vocab) {
  const Lexicon& lex = vocab.lexicon();
  std::string out;
  bool capitalize = false;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const std::string& s = surfaces[i];
    if (auto label = parse_special_surface(s)) {
      if (*label == SpecialLabel::Uppercase)
        capitalize = true;
      else
        out.append(special_text(*label));
      continue;
    }
    const bool known = lex.find_root(s) != nullptr || !lex.affixes_with(s).empty() ||
                       vocab.bpe_id(s).has_value() || vocab.char_id(s).has_value();
    if (!known) throw data_error("token " + std::to_string(i) + ": unknown surface '" + s + "'");
    if (capitalize && unicode::is_word_char(unicode::first_cp(s))) {
      out.append(unicode::capitalize_first(s));
      capitalize = false;
    } else {
      out.append(s);
    }
  }
  return out;
}

}  // namespace morphtok
