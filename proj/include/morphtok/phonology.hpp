#pragma once

// Phonological realization: picks the surface allomorph of a suffix group
// and the surface variant of a root from their neighbours. All tables are
// data loaded with the lexicon; nothing here is specific to one language.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morphtok/types.hpp"
#include "morphtok/unicode.hpp"

namespace morphtok {

struct PhonologyRules {
  std::u32string front;    // front vowels
  std::u32string back;     // back vowels
  std::u32string rounded;  // rounded vowels (subset of front/back)
  std::u32string two_way;  // low suffix vowels alternating by frontness (a/e)
  std::u32string four_way; // high suffix vowels alternating by frontness and rounding
  std::u32string voiceless;
  // Root/suffix-final voiceless consonant -> voiced replacements (k -> ğ, g).
  std::vector<std::pair<char32_t, std::u32string>> devoicing;
  // Suffix-initial voiced consonant -> voiceless counterpart (d -> t).
  std::vector<std::pair<char32_t, char32_t>> assimilation;
  std::vector<std::string> hiatus_triggers;

  bool is_vowel(char32_t c) const {
    return c != 0 && (front.find(c) != std::u32string::npos ||
                      back.find(c) != std::u32string::npos);
  }
  bool is_front(char32_t c) const { return front.find(c) != std::u32string::npos; }
  bool is_rounded(char32_t c) const { return rounded.find(c) != std::u32string::npos; }
  bool is_voiceless(char32_t c) const {
    return c != 0 && voiceless.find(c) != std::u32string::npos;
  }

  std::u32string_view voiced_forms(char32_t hard) const {
    for (const auto& [h, soft] : devoicing)
      if (h == hard) return soft;
    return {};
  }

  // 0 when `c` takes no part in assimilation, +1 for the voiced member, -1 for
  // the voiceless member.
  int assimilation_role(char32_t c) const {
    for (const auto& [voiced, unvoiced] : assimilation) {
      if (c == voiced) return 1;
      if (c == unvoiced) return -1;
    }
    return 0;
  }

  // High vowel agreeing with `v` in frontness and rounding.
  char32_t high_vowel_like(char32_t v) const {
    for (char32_t h : four_way)
      if (is_front(h) == is_front(v) && is_rounded(h) == is_rounded(v)) return h;
    return 0;
  }

  // Turkish tables; bundled lexicons carry their own copy.
  static PhonologyRules turkish() {
    PhonologyRules r;
    r.front = U"eiöüî";
    r.back = U"aıouâû";
    r.rounded = U"oöuüû";
    r.two_way = U"ae";
    r.four_way = U"ıiuü";
    r.voiceless = U"fstkçşhp";
    r.devoicing = {{U'p', U"b"}, {U'ç', U"c"}, {U't', U"d"}, {U'k', U"ğg"}};
    r.assimilation = {{U'd', U't'}, {U'c', U'ç'}};
    r.hiatus_triggers = {"yor"};
    return r;
  }
};

// Phonological context left by everything realized so far in a word.
struct Tail {
  char32_t last = 0;
  char32_t last_vowel = 0;

  void extend(std::string_view s, const PhonologyRules& rules) {
    for (std::size_t i = 0; i < s.size();) {
      const char32_t c = unicode::next_cp(s, i);
      last = c;
      if (rules.is_vowel(c)) last_vowel = c;
    }
  }

  static Tail of(std::string_view s, const PhonologyRules& rules) {
    Tail t;
    t.extend(s, rules);
    return t;
  }
};

namespace detail {

inline char32_t first_vowel(std::string_view s, const PhonologyRules& rules) {
  for (std::size_t i = 0; i < s.size();) {
    const char32_t c = unicode::next_cp(s, i);
    if (rules.is_vowel(c)) return c;
  }
  return 0;
}

inline bool harmonizes(std::string_view allomorph, char32_t last_vowel,
                       const PhonologyRules& rules) {
  const char32_t v = first_vowel(allomorph, rules);
  if (v == 0) return true;
  if (rules.two_way.find(v) != std::u32string::npos)
    return rules.is_front(v) == rules.is_front(last_vowel);
  if (rules.four_way.find(v) != std::u32string::npos)
    return rules.is_front(v) == rules.is_front(last_vowel) &&
           rules.is_rounded(v) == rules.is_rounded(last_vowel);
  return true;
}

// +1 if `a` is the softened (voiced-final) twin of another allomorph in the
// group, -1 if it is the hard twin, 0 if it has no twin.
inline int softening_role(const AffixGroup& group, std::size_t idx,
                          const PhonologyRules& rules) {
  const std::string& a = group.allomorphs[idx];
  const char32_t last = unicode::last_cp(a);
  const std::size_t cut = a.size() - unicode::to_utf8(last).size();
  const std::string_view stem(a.data(), cut);
  for (const auto& [hard, softs] : rules.devoicing) {
    if (last == hard) {
      for (char32_t s : softs) {
        std::string twin(stem);
        unicode::append_utf8(twin, s);
        if (group.has_allomorph(twin)) return -1;
      }
    } else if (softs.find(last) != std::u32string::npos) {
      std::string twin(stem);
      unicode::append_utf8(twin, hard);
      if (group.has_allomorph(twin)) return 1;
    }
  }
  return 0;
}

template <class Pred>
inline void narrow(std::uint64_t& mask, const AffixGroup& group, Pred&& keep) {
  std::uint64_t kept = 0;
  for (std::size_t i = 0; i < group.allomorphs.size(); ++i)
    if ((mask >> i & 1u) && keep(i)) kept |= std::uint64_t{1} << i;
  if (kept != 0) mask = kept;
}

}  // namespace detail

// Allomorph of `group` that fits after `tail`. Constraints are applied in
// order (vowel/consonant buffer, voicing assimilation, vowel harmony, final
// softening before a vowel-initial `next`); a constraint that no allomorph
// satisfies is skipped, so a single invariant allomorph always wins.
inline std::string_view realize_suffix(const AffixGroup& group, const Tail& tail,
                                       const PhonologyRules& rules,
                                       std::string_view next = {}) {
  if (group.allomorphs.empty()) return {};
  const std::size_t n = group.allomorphs.size();
  std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const auto& al = group.allomorphs;

  if (tail.last != 0) {
    const bool after_vowel = rules.is_vowel(tail.last);
    detail::narrow(mask, group, [&](std::size_t i) {
      return rules.is_vowel(unicode::first_cp(al[i])) != after_vowel;
    });
    const bool after_voiceless = rules.is_voiceless(tail.last);
    detail::narrow(mask, group, [&](std::size_t i) {
      const int role = rules.assimilation_role(unicode::first_cp(al[i]));
      return role == 0 || (role < 0) == after_voiceless;
    });
  }
  if (tail.last_vowel != 0) {
    detail::narrow(mask, group, [&](std::size_t i) {
      return detail::harmonizes(al[i], tail.last_vowel, rules);
    });
  }
  const bool before_vowel = rules.is_vowel(unicode::first_cp(next));
  detail::narrow(mask, group, [&](std::size_t i) {
    const int role = group.soft_role.size() == n ? group.soft_role[i]
                                                 : detail::softening_role(group, i, rules);
    return role == 0 || (role > 0) == before_vowel;
  });

  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) return al[i];
  return al.front();
}

inline std::string_view realize_suffix(const AffixGroup& group, std::string_view preceding,
                                       const PhonologyRules& rules,
                                       std::string_view next = {}) {
  return realize_suffix(group, Tail::of(preceding, rules), rules, next);
}

// Surface variant of `entry` before `next` (the realized following morpheme,
// empty at word end). Always returns one of the entry's registered variants.
inline std::string_view realize_root(const RootEntry& entry, std::string_view next,
                                     const PhonologyRules& rules) {
  const std::string& canon = entry.canonical;
  if (next.empty() || canon.empty()) return canon;

  auto registered = [&](const std::string& candidate) -> std::string_view {
    for (const auto& v : entry.variants)
      if (v == candidate) return v;
    return {};
  };

  const char32_t last = unicode::last_cp(canon);
  const std::size_t cut = canon.size() - unicode::to_utf8(last).size();
  const std::string_view stem(canon.data(), cut);

  if (entry.hiatus && rules.two_way.find(last) != std::u32string::npos) {
    for (const auto& trigger : rules.hiatus_triggers) {
      if (!next.starts_with(trigger)) continue;
      const char32_t prev = Tail::of(stem, rules).last_vowel;
      const char32_t high = prev ? rules.high_vowel_like(prev) : 0;
      if (high == 0) break;
      std::string candidate(stem);
      unicode::append_utf8(candidate, high);
      if (auto v = registered(candidate); !v.empty()) return v;
      break;
    }
  }

  if (!rules.is_vowel(unicode::first_cp(next))) return canon;

  if (entry.haplology) {
    // C V C at the end with a high V: drop the V.
    const std::u32string cps = unicode::to_u32(canon);
    if (cps.size() >= 3) {
      const char32_t v = cps[cps.size() - 2];
      if (rules.four_way.find(v) != std::u32string::npos && !rules.is_vowel(cps.back()) &&
          !rules.is_vowel(cps[cps.size() - 3])) {
        std::u32string reduced = cps;
        reduced.erase(reduced.size() - 2, 1);
        if (auto hit = registered(unicode::to_utf8(reduced)); !hit.empty()) return hit;
      }
    }
  }

  for (char32_t soft : rules.voiced_forms(last)) {
    std::string candidate(stem);
    unicode::append_utf8(candidate, soft);
    if (auto v = registered(candidate); !v.empty()) return v;
  }
  return canon;
}

}  // namespace morphtok
