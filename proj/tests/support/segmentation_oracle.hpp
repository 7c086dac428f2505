#pragma once

// Exhaustive reference for word segmentation over a 30-entry micro-lexicon
// (12 roots, 18 affix groups). The oracle enumerates every root-variant +
// allomorph* cover (and root + allomorph* + root cover) without pruning, keeps
// those the decoder realizes back to the word, and picks the best under the
// documented preference order:
//   whole-word root; then longest root; for one root, full suffix covers
//   before remainder-root covers; within those, lexicographic on
//   (longer allomorph, lower group ID) per step, a remainder root ranking
//   before any further suffix; then root + BPE; then whole-word BPE.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "morphtok/bpe.hpp"
#include "morphtok/decoder.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/unicode.hpp"
#include "morphtok/vocabulary.hpp"

namespace morphtok::testing {

inline constexpr std::string_view kMicroLexicon = R"({
  "format_version": 1,
  "specials": ["uppercase", "space", "newline", "tab", "unknown"],
  "phonology": {
    "vowels": {"front": "eiöü", "back": "aıou", "rounded": "oöuü"},
    "harmony": {"two_way": "ae", "four_way": "ıiuü"},
    "voiceless": "fstkçşhp",
    "devoicing": {"p": "b", "ç": "c", "t": "d", "k": "ğg"},
    "assimilation": {"d": "t", "c": "ç"},
    "hiatus_triggers": ["yor"]
  },
  "roots": [
    {"canonical": "kitap", "variants": ["kitab"]},
    {"canonical": "ev"},
    {"canonical": "kal"},
    {"canonical": "kalk"},
    {"canonical": "alın", "variants": ["aln"], "haplology": true},
    {"canonical": "oyna", "variants": ["oynu"], "hiatus": true},
    {"canonical": "göz"},
    {"canonical": "gözlük", "variants": ["gözlüğ"]},
    {"canonical": "söz"},
    {"canonical": "sözle"},
    {"canonical": "at"},
    {"canonical": "ata"}
  ],
  "affixes": [
    {"function": "PLURAL", "allomorphs": ["ler", "lar"]},
    {"function": "ACCUSATIVE", "allomorphs": ["ı", "i", "u", "ü", "yı", "yi", "yu", "yü"]},
    {"function": "DATIVE", "allomorphs": ["a", "e", "ya", "ye"]},
    {"function": "LOCATIVE", "allomorphs": ["da", "de", "ta", "te"]},
    {"function": "ABLATIVE", "allomorphs": ["dan", "den", "tan", "ten"]},
    {"function": "GENITIVE", "allomorphs": ["ın", "in", "un", "ün", "nın", "nin", "nun", "nün"]},
    {"function": "POSS_3SG", "allomorphs": ["ı", "i", "u", "ü", "sı", "si", "su", "sü"]},
    {"function": "POSS_1SG", "allomorphs": ["ım", "im", "um", "üm", "m"]},
    {"function": "POSS_1PL", "allomorphs": ["ımız", "imiz", "umuz", "ümüz", "mız", "miz", "muz", "müz"]},
    {"function": "PAST", "allomorphs": ["dı", "di", "du", "dü", "tı", "ti", "tu", "tü"]},
    {"function": "PROGRESSIVE", "allomorphs": ["yor"]},
    {"function": "PARTICIPLE_DIK", "allomorphs": ["dığ", "diğ", "duğ", "düğ", "tığ", "tiğ", "tuğ", "tüğ"]},
    {"function": "PAST_1PL", "allomorphs": ["k"]},
    {"function": "COPULA", "allomorphs": ["dır", "dir", "dur", "dür", "tır", "tir", "tur", "tür"]},
    {"function": "AORIST", "allomorphs": ["ar", "er", "ır", "ir", "ur", "ür", "r"]},
    {"function": "WITH", "allomorphs": ["lı", "li", "lu", "lü"]},
    {"function": "NESS", "allomorphs": ["lık", "lik", "luk", "lük", "lığ", "liğ", "luğ", "lüğ"]},
    {"function": "OPTATIVE", "allomorphs": ["a", "e", "ya", "ye"]}
  ],
  "chars": ["a", "b", "d", "e", "g", "ğ", "i", "ı", "k", "l", "m", "n", "o", "p", "r", "s", "t", "u", "ü", "ö", "y", "z", "."]
})";

inline Vocabulary micro_vocabulary() {
  Lexicon lex = load_lexicon_string(kMicroLexicon, "micro");
  // A small BPE model so branch (d) sees multi-character subwords.
  const WordCounts corpus = {{"kitaplar", 3}, {"evler", 3}, {"kalktık", 2}, {"gözlük", 2},
                             {"sözler", 2},   {"atlar", 2}, {"alnı", 1},    {"oynuyor", 2},
                             {"kelebek", 2},  {"dere", 2},  {"tepe", 2}};
  return Vocabulary(std::move(lex), train_bpe(corpus, 40));
}

// Words to check: every realization of root + up to three suffix groups and
// of root + up to two groups + root (at most 12 characters), all their
// prefixes, and every string of up to three letters from the lexicon alphabet.
inline std::vector<std::string> micro_words(const Vocabulary& v) {
  const Lexicon& lex = v.lexicon();
  std::set<std::string> words;
  auto add_with_prefixes = [&](const std::string& w) {
    if (unicode::cp_count(w) > 12) return;
    for (std::size_t i = 1; i <= w.size(); ++i)
      if (unicode::is_boundary(w, i)) words.insert(w.substr(0, i));
  };
  std::vector<TokenId> ids;
  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    add_with_prefixes(realize_word(ids, v));
    if (depth < 2)
      for (const auto& r : lex.roots()) {
        ids.push_back(r.id);
        add_with_prefixes(realize_word(ids, v));
        ids.pop_back();
      }
    if (depth == 3) return;
    for (const auto& g : lex.affixes()) {
      ids.push_back(g.id);
      extend(depth + 1);
      ids.pop_back();
    }
  };
  for (const auto& r : lex.roots()) {
    ids.assign(1, r.id);
    extend(0);
  }
  std::vector<std::string> letters;
  for (const auto& c : lex.chars())
    if (unicode::is_word_char(unicode::first_cp(c))) letters.push_back(c);
  for (const auto& a : letters) {
    words.insert(a);
    for (const auto& b : letters) {
      words.insert(a + b);
      for (const auto& c : letters) words.insert(a + b + c);
    }
  }
  return {words.begin(), words.end()};
}

namespace oracle_detail {

struct Candidate {
  std::size_t root_len = 0;
  int type = 0;  // 0: suffix cover, 1: suffix cover + remainder root
  std::vector<std::pair<std::int64_t, std::int64_t>> key;
  std::vector<TokenId> ids;

  bool better_than(const Candidate& o) const {
    return std::tie(o.root_len, type, key) < std::tie(root_len, o.type, o.key);
  }
};

inline void enumerate(std::string_view word, std::size_t pos, Candidate& cur, const Lexicon& lex,
                      const std::function<void(const Candidate&)>& emit) {
  const std::string_view rest = word.substr(pos);
  if (rest.empty()) {
    cur.type = 0;
    emit(cur);
    return;
  }
  for (const auto& r : lex.roots())
    for (const auto& v : r.variants)
      if (rest == v) {
        Candidate c = cur;
        c.type = 1;
        c.key.emplace_back(INT64_MIN, 0);
        c.ids.push_back(r.id);
        emit(c);
      }
  for (const auto& g : lex.affixes())
    for (const auto& a : g.allomorphs)
      if (rest.starts_with(a)) {
        cur.key.emplace_back(-static_cast<std::int64_t>(a.size()), g.id);
        cur.ids.push_back(g.id);
        enumerate(word, pos + a.size(), cur, lex, emit);
        cur.key.pop_back();
        cur.ids.pop_back();
      }
}

// BPE pieces as IDs; false if a piece is neither a subword nor a char.
inline bool bpe_ids(std::string_view text, const Vocabulary& v, std::vector<TokenId>& out) {
  for (auto piece : v.bpe().segment(text)) {
    if (auto id = v.bpe_id(piece)) out.push_back(*id);
    else if (auto cid = v.char_id(piece)) out.push_back(*cid);
    else return false;
  }
  return true;
}

}  // namespace oracle_detail

inline std::vector<TokenId> oracle_segment(std::string_view word, const Vocabulary& v) {
  using oracle_detail::Candidate;
  const Lexicon& lex = v.lexicon();
  for (const auto& r : lex.roots())
    if (r.canonical == word) return {r.id};

  std::optional<Candidate> best;
  for (const auto& r : lex.roots())
    for (const auto& var : r.variants) {
      if (var.size() >= word.size() || !word.starts_with(var)) continue;
      Candidate cur;
      cur.root_len = var.size();
      cur.ids = {r.id};
      oracle_detail::enumerate(word, var.size(), cur, lex, [&](const Candidate& c) {
        if (best && !c.better_than(*best)) return;
        if (realize_word(c.ids, v) == word) best = c;
      });
    }
  if (best) return best->ids;

  // Root + BPE, longest root first.
  std::vector<std::pair<std::size_t, TokenId>> prefixes;
  for (const auto& r : lex.roots())
    for (const auto& var : r.variants)
      if (var.size() < word.size() && word.starts_with(var)) prefixes.emplace_back(var.size(), r.id);
  std::sort(prefixes.begin(), prefixes.end(), std::greater<>());
  for (const auto& [len, id] : prefixes) {
    std::vector<TokenId> ids{id};
    if (oracle_detail::bpe_ids(word.substr(len), v, ids) && realize_word(ids, v) == word) return ids;
  }

  std::vector<TokenId> ids;
  const TokenId unk = v.special_id(SpecialLabel::Unknown);
  for (auto piece : v.bpe().segment(word)) {
    if (auto id = v.bpe_id(piece)) ids.push_back(*id);
    else if (auto cid = v.char_id(piece)) ids.push_back(*cid);
    else if (ids.empty() || ids.back() != unk) ids.push_back(unk);
  }
  return ids;
}

}  // namespace morphtok::testing
