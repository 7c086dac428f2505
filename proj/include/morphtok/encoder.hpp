#pragma once

// Text -> IDs. Each word goes through, in order:
//   (a) the whole word is a root;
//   (b) root prefix + suffix chain covering the rest;
//   (c) root prefix + suffix chain + a remainder that is itself a root;
//   (d) root prefix + BPE on the rest, else BPE on the whole word;
//   (e) characters BPE cannot represent become char IDs, else unknown.
// Roots are tried longest first, (b) before (c) for each root. Within a
// chain the longest allomorph is tried first, then the lowest group ID, with
// full backtracking. A candidate is accepted only if the decoder realizes it
// back to the exact word.

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "morphtok/decoder.hpp"
#include "morphtok/phonology.hpp"
#include "morphtok/types.hpp"
#include "morphtok/unicode.hpp"
#include "morphtok/vocabulary.hpp"

namespace morphtok {

struct EncodedText {
  std::vector<TokenId> ids;
  std::vector<TokenKind> provenance;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  void push(TokenId id, TokenKind kind) {
    ids.push_back(id);
    provenance.push_back(kind);
  }
  friend bool operator==(const EncodedText&, const EncodedText&) = default;
};

struct PreSegment {
  enum class Kind : std::uint8_t { Word, Special, Char };
  Kind kind = Kind::Word;
  std::string payload;  // lowercased word, label name, or the character
  bool uppercase = false;
  SpecialLabel label = SpecialLabel::Unknown;

  friend bool operator==(const PreSegment&, const PreSegment&) = default;
};

namespace detail {

inline std::optional<SpecialLabel> whitespace_label(char32_t c) {
  switch (c) {
    case U' ': return SpecialLabel::Space;
    case U'\n': return SpecialLabel::Newline;
    case U'\t': return SpecialLabel::Tab;
    default: return std::nullopt;
  }
}

// Calls fn(kind, text, label) for each segment of NFC text, without copying.
template <class Fn>
void scan_segments(std::string_view text, Fn&& fn) {
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t begin = i;
    const char32_t c = unicode::next_cp(text, i);
    if (auto label = whitespace_label(c)) {
      fn(PreSegment::Kind::Special, text.substr(begin, i - begin), *label);
    } else if (unicode::is_word_char(c)) {
      std::size_t end = i;
      while (end < text.size()) {
        std::size_t k = end;
        if (!unicode::is_word_char(unicode::next_cp(text, k))) break;
        end = k;
      }
      i = end;
      fn(PreSegment::Kind::Word, text.substr(begin, end - begin), SpecialLabel::Unknown);
    } else {
      fn(PreSegment::Kind::Char, text.substr(begin, i - begin), SpecialLabel::Unknown);
    }
  }
}

}  // namespace detail

// Splits text into words, whitespace specials (one per character) and
// single-character segments. Words are lowercased with Turkish folding; a
// capital first letter sets `uppercase`. Capitals elsewhere in a word are not
// preserved.
inline std::vector<PreSegment> preprocess(std::string_view text) {
  const std::string norm = unicode::nfc(text);
  std::vector<PreSegment> out;
  detail::scan_segments(norm, [&](PreSegment::Kind kind, std::string_view s, SpecialLabel label) {
    PreSegment seg;
    seg.kind = kind;
    switch (kind) {
      case PreSegment::Kind::Special:
        seg.label = label;
        seg.payload = std::string(label_name(label));
        break;
      case PreSegment::Kind::Word:
        seg.uppercase = unicode::is_upper(unicode::first_cp(s));
        seg.payload = unicode::to_lower(s);
        break;
      case PreSegment::Kind::Char:
        seg.payload = std::string(s);
        break;
    }
    out.push_back(std::move(seg));
  });
  return out;
}

namespace detail {

class WordEncoder {
 public:
  WordEncoder(const Vocabulary& vocab, std::string_view word, EncodedText& out)
      : vocab_(vocab), lex_(vocab.lexicon()), rules_(vocab.rules()), word_(word), out_(out) {}

  void run() {
    if (word_.empty()) return;
    // (a)
    if (const RootEntry* r = lex_.find_root(word_); r != nullptr && r->canonical == word_) {
      out_.push(r->id, TokenKind::Root);
      return;
    }
    // (b), (c)
    bool done = false;
    lex_.for_each_root_prefix(word_, [&](const RootMatch& m) {
      if (m.remainder.empty()) return true;
      prepare_tables();
      items_.assign(1, m.entry->id);
      kinds_.assign(1, TokenKind::Root);
      if (cover(m.matched.size()) || cover_with_root(m.matched.size())) {
        done = true;
        return false;
      }
      return true;
    });
    if (done) return emit();
    // (d)
    lex_.for_each_root_prefix(word_, [&](const RootMatch& m) {
      if (m.remainder.empty()) return true;
      items_.assign(1, m.entry->id);
      kinds_.assign(1, TokenKind::Root);
      if (append_bpe(m.remainder, false) && realizes()) {
        done = true;
        return false;
      }
      return true;
    });
    if (done) return emit();
    items_.clear();
    kinds_.clear();
    append_bpe(word_, true);
    emit();
  }

 private:
  void emit() {
    for (std::size_t i = 0; i < items_.size(); ++i) out_.push(items_[i], kinds_[i]);
  }

  bool realizes() {
    infos_.clear();
    for (TokenId id : items_) infos_.push_back(vocab_.resolve(id));
    scratch_.clear();
    realize_run(infos_, rules_, scratch_);
    return scratch_ == word_;
  }

  // coverable_[p]: word_[p:] splits into allomorphs (ignoring phonology).
  // tails_[p]: phonological context of word_[0:p].
  void prepare_tables() {
    if (!coverable_.empty()) return;
    const std::size_t n = word_.size();
    coverable_.assign(n + 1, 0);
    coverable_[n] = 1;
    for (std::size_t p = n; p-- > 0;) {
      if (!unicode::is_boundary(word_, p)) continue;
      lex_.for_each_suffix(word_.substr(p), [&](const SuffixMatch& m) {
        if (coverable_[p + m.allomorph.size()]) {
          coverable_[p] = 1;
          return false;
        }
        return true;
      });
    }
    tails_.assign(n + 1, Tail{});
    Tail t;
    for (std::size_t i = 0; i < n;) {
      const std::size_t b = i;
      const char32_t c = unicode::next_cp(word_, i);
      t.last = c;
      if (rules_.is_vowel(c)) t.last_vowel = c;
      for (std::size_t k = b + 1; k <= i; ++k) tails_[k] = t;
    }
    vowel_context_.clear();
    if (!rules_.back.empty()) vowel_context_ = unicode::to_utf8(rules_.back.front());
    else if (!rules_.front.empty()) vowel_context_ = unicode::to_utf8(rules_.front.front());
  }

  // The allomorph could be what the decoder realizes at p, whatever follows.
  bool fits(const SuffixMatch& m, std::size_t p) const {
    const Tail& t = tails_[p];
    return realize_suffix(*m.group, t, rules_) == m.allomorph ||
           realize_suffix(*m.group, t, rules_, vowel_context_) == m.allomorph;
  }

  bool cover(std::size_t p) {
    if (p == word_.size()) return realizes();
    if (!coverable_[p]) return false;
    bool found = false;
    lex_.for_each_suffix(word_.substr(p), [&](const SuffixMatch& m) {
      const std::size_t q = p + m.allomorph.size();
      if (!coverable_[q] || !fits(m, p)) return true;
      items_.push_back(m.group->id);
      kinds_.push_back(TokenKind::Suffix);
      if (cover(q)) {
        found = true;
        return false;
      }
      items_.pop_back();
      kinds_.pop_back();
      return true;
    });
    return found;
  }

  // Pre-order: the remainder-as-root check at a node comes before extending
  // the chain.
  bool cover_with_root(std::size_t p) {
    if (p == word_.size()) return false;
    if (const RootEntry* r = lex_.find_root(word_.substr(p))) {
      items_.push_back(r->id);
      kinds_.push_back(TokenKind::Root);
      if (realizes()) return true;
      items_.pop_back();
      kinds_.pop_back();
    }
    bool found = false;
    lex_.for_each_suffix(word_.substr(p), [&](const SuffixMatch& m) {
      if (!fits(m, p)) return true;
      items_.push_back(m.group->id);
      kinds_.push_back(TokenKind::Suffix);
      if (cover_with_root(p + m.allomorph.size())) {
        found = true;
        return false;
      }
      items_.pop_back();
      kinds_.pop_back();
      return true;
    });
    return found;
  }

  // Appends BPE pieces of `text`; pieces outside the subword vocabulary fall
  // back to char IDs, then to one unknown ID per run of unrepresentable
  // characters. Returns false if an unknown was needed and !allow_unknown.
  bool append_bpe(std::string_view text, bool allow_unknown) {
    for (std::string_view piece : vocab_.bpe().segment(text)) {
      if (auto id = vocab_.bpe_id(piece)) {
        items_.push_back(*id);
        kinds_.push_back(TokenKind::BpeSubword);
        continue;
      }
      // Out-of-vocabulary pieces are single characters.
      if (auto id = vocab_.char_id(piece)) {
        items_.push_back(*id);
        kinds_.push_back(TokenKind::Char);
        continue;
      }
      if (!allow_unknown) return false;
      if (!kinds_.empty() && kinds_.back() == TokenKind::Unknown) continue;
      items_.push_back(vocab_.special_id(SpecialLabel::Unknown));
      kinds_.push_back(TokenKind::Unknown);
    }
    return true;
  }

  const Vocabulary& vocab_;
  const Lexicon& lex_;
  const PhonologyRules& rules_;
  std::string_view word_;
  EncodedText& out_;

  std::vector<TokenId> items_;
  std::vector<TokenKind> kinds_;
  std::vector<TokenInfo> infos_;
  std::string scratch_;
  std::vector<char> coverable_;
  std::vector<Tail> tails_;
  std::string vowel_context_;
};

inline void push_char(std::string_view ch, const Vocabulary& vocab, EncodedText& out) {
  if (auto id = vocab.char_id(ch)) {
    out.push(*id, TokenKind::Char);
  } else if (auto bid = vocab.bpe_id(ch)) {
    out.push(*bid, TokenKind::BpeSubword);
  } else if (out.provenance.empty() || out.provenance.back() != TokenKind::Unknown) {
    out.push(vocab.special_id(SpecialLabel::Unknown), TokenKind::Unknown);
  }
}

}  // namespace detail

// Appends the IDs of one lowercased, NFC word.
inline void encode_word(std::string_view word, const Vocabulary& vocab, EncodedText& out) {
  detail::WordEncoder(vocab, word, out).run();
}

inline std::vector<TokenId> encode_word(std::string_view word, const Vocabulary& vocab) {
  EncodedText out;
  encode_word(word, vocab, out);
  return std::move(out.ids);
}

inline void encode(std::string_view text, const Vocabulary& vocab, EncodedText& out) {
  const std::string norm = unicode::nfc(text);
  std::string lowered;
  detail::scan_segments(norm, [&](PreSegment::Kind kind, std::string_view s, SpecialLabel label) {
    switch (kind) {
      case PreSegment::Kind::Special:
        out.push(vocab.special_id(label), TokenKind::Special);
        break;
      case PreSegment::Kind::Word:
        if (unicode::is_upper(unicode::first_cp(s)))
          out.push(vocab.special_id(SpecialLabel::Uppercase), TokenKind::Special);
        lowered = unicode::to_lower(s);
        encode_word(lowered, vocab, out);
        break;
      case PreSegment::Kind::Char:
        detail::push_char(s, vocab, out);
        break;
    }
  });
}

inline EncodedText encode(std::string_view text, const Vocabulary& vocab) {
  EncodedText out;
  encode(text, vocab, out);
  return out;
}

// Encodes documents on up to `jobs` threads; results are in input order and
// identical to encoding each document on its own.
inline std::vector<EncodedText> encode_all(std::span<const std::string> docs,
                                           const Vocabulary& vocab, unsigned jobs = 1) {
  std::vector<EncodedText> out(docs.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(docs.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) encode(docs[i], vocab, out[i]);
    return out;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < docs.size(); i += jobs) encode(docs[i], vocab, out[i]);
    });
  for (auto& t : workers) t.join();
  return out;
}

}  // namespace morphtok
