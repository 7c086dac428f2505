#pragma once

// Seeded generator of lexicon-covered Turkish-like text: random roots with
// nominal or verbal suffix chains, realized through the decoder, joined with
// random whitespace, punctuation and sentence-initial capitals. Used for
// round-trip checks and throughput measurements.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "morphtok/decoder.hpp"
#include "morphtok/unicode.hpp"
#include "morphtok/vocabulary.hpp"

namespace morphtok {

class SentenceGenerator {
 public:
  SentenceGenerator(const Vocabulary& vocab, std::uint64_t seed) : vocab_(vocab), rng_(seed) {
    const Lexicon& lex = vocab.lexicon();
    for (const auto& g : lex.affixes()) groups_.emplace_back(g.function, g.id);
    for (const auto& r : lex.roots()) roots_.push_back(r.id);
  }

  // Suffix chain templates by function name; each slot is optional.
  std::vector<TokenId> word_ids() {
    std::vector<TokenId> ids;
    if (roots_.empty()) return ids;
    ids.push_back(roots_[pick(roots_.size())]);
    const RootEntry& root = vocab_.lexicon().root_by_id(ids.front());
    if (root.functional || coin(0.25)) return ids;
    if (coin(0.6)) {
      maybe(ids, 0.4, {"PLURAL"});
      maybe(ids, 0.4, {"POSS_1SG", "POSS_2SG", "POSS_3SG", "POSS_1PL", "POSS_2PL"});
      maybe(ids, 0.5, {"ACCUSATIVE", "DATIVE", "LOCATIVE", "ABLATIVE", "GENITIVE", "INSTRUMENTAL"});
      maybe(ids, 0.1, {"COPULA"});
      maybe(ids, 0.1, {"WITH", "WITHOUT", "NESS"});
    } else {
      maybe(ids, 0.1, {"ABILITY"});
      maybe(ids, 0.2, {"NEGATIVE"});
      const auto tense = one_of({"PAST", "EVIDENTIAL", "PROGRESSIVE", "FUTURE", "AORIST",
                                 "CONDITIONAL", "INFINITIVE", "PARTICIPLE_AN", "PARTICIPLE_DIK"});
      if (tense == "PROGRESSIVE" && ends_in_consonant(ids)) add(ids, "ACCUSATIVE");
      add(ids, tense);
      if (tense == "PAST" || tense == "CONDITIONAL")
        maybe(ids, 0.5, {"PAST_1PL", "PAST_2SG"});
      else if (tense == "PARTICIPLE_DIK")
        add(ids, one_of({"POSS_1SG", "POSS_3SG", "POSS_1PL"}));
      else if (tense != "INFINITIVE" && tense != "PARTICIPLE_AN")
        maybe(ids, 0.5, {"PERS_1SG", "PERS_2SG", "PERS_1PL"});
      maybe(ids, 0.2, {"LOCATIVE", "DATIVE"});
    }
    return ids;
  }

  std::string word() { return realize_word(word_ids(), vocab_); }

  // 3-10 words; first word capitalized; whitespace runs may contain several
  // spaces, tabs or newlines.
  std::string sentence() {
    std::string out;
    const std::size_t n = 3 + pick(8);
    for (std::size_t i = 0; i < n; ++i) {
      std::string w = word();
      if (i == 0 || coin(0.05)) w = unicode::capitalize_first(w);
      out += w;
      if (i + 1 < n) {
        if (coin(0.08)) out += ",";
        out += whitespace();
      }
    }
    out += one_of({".", ".", ".", "!", "?", "…"});
    return out;
  }

  // Sentences separated by random whitespace until `min_chars` code points.
  std::string corpus(std::size_t min_chars) {
    std::string out;
    std::size_t chars = 0;
    while (chars < min_chars) {
      std::string s = sentence();
      s += coin(0.2) ? "\n" : " ";
      chars += unicode::cp_count(s);
      out += s;
    }
    return out;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string one_of(std::initializer_list<const char*> options) {
    auto it = options.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(pick(options.size())));
    return *it;
  }

  void add(std::vector<TokenId>& ids, std::string_view function) {
    for (const auto& [f, id] : groups_)
      if (f == function) {
        ids.push_back(id);
        return;
      }
  }

  void maybe(std::vector<TokenId>& ids, double p, std::initializer_list<const char*> options) {
    if (coin(p)) add(ids, one_of(options));
  }

  bool ends_in_consonant(const std::vector<TokenId>& ids) {
    const std::string s = realize_word(ids, vocab_);
    return !vocab_.rules().is_vowel(unicode::last_cp(s));
  }

  std::string whitespace() {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.85) return " ";
    if (r < 0.90) return "  ";
    if (r < 0.94) return "\t";
    if (r < 0.98) return "\n";
    return " \n\t ";
  }

  const Vocabulary& vocab_;
  std::mt19937_64 rng_;
  std::vector<std::pair<std::string, TokenId>> groups_;
  std::vector<TokenId> roots_;
};

}  // namespace morphtok
