#pragma once

// The ID-assigning vocabulary: specials, roots (with phonological variants),
// affix allomorph groups and fallback characters, plus the phonology tables
// that travel with them.
//
// Document format (UTF-8 JSON):
//   {
//     "format_version": 1,
//     "specials":  ["uppercase", "space", "newline", "tab", "unknown"],
//     "phonology": { ... optional, see parse_phonology ... },
//     "roots":     [{"canonical": "kitap", "variants": ["kitab"]},
//                   {"canonical": "alın", "variants": ["aln"], "haplology": true},
//                   {"canonical": "akarsu", "compound": true}, ...],
//     "affixes":   [{"function": "PLURAL", "allomorphs": ["ler", "lar"]}, ...],
//     "chars":     [".", ",", ...]
//   }
// IDs are implicit: specials, roots and affixes are numbered contiguously in
// document order. BPE subwords follow the affixes and characters come last,
// so character IDs are only fixed once a BPE model is attached (Vocabulary).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "morphtok/error.hpp"
#include "morphtok/phonology.hpp"
#include "morphtok/types.hpp"
#include "morphtok/unicode.hpp"

namespace morphtok {

inline constexpr int kLexiconFormatVersion = 1;

namespace detail {

struct string_hash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <class V>
using string_map = std::unordered_map<std::string, V, string_hash, std::equal_to<>>;

}  // namespace detail

struct RootMatch {
  const RootEntry* entry = nullptr;
  std::string_view matched;    // the variant that prefixes the word
  std::string_view remainder;  // what follows it
};

struct SuffixMatch {
  const AffixGroup* group = nullptr;
  std::string_view allomorph;
  std::string_view remainder;
};

class Lexicon {
 public:
  Lexicon() = default;

  const std::vector<SpecialToken>& specials() const { return specials_; }
  const std::vector<RootEntry>& roots() const { return roots_; }
  const std::vector<AffixGroup>& affixes() const { return affixes_; }
  const std::vector<std::string>& chars() const { return chars_; }
  const PhonologyRules& rules() const { return rules_; }

  TokenId special_id(SpecialLabel label) const { return special_ids_[static_cast<int>(label)]; }
  TokenId root_base() const { return static_cast<TokenId>(specials_.size()); }
  TokenId affix_base() const { return root_base() + static_cast<TokenId>(roots_.size()); }
  // First ID after the affixes; BPE subwords start here.
  TokenId bpe_base() const { return affix_base() + static_cast<TokenId>(affixes_.size()); }
  // IDs the lexicon itself accounts for (everything but BPE subwords).
  std::size_t size() const { return bpe_base() + chars_.size(); }

  // Root owning `surface` as one of its variants.
  const RootEntry* find_root(std::string_view surface) const {
    if (surface.size() >= root_buckets_.size()) return nullptr;
    const auto& bucket = root_buckets_[surface.size()];
    const auto it = bucket.find(surface);
    return it == bucket.end() ? nullptr : &roots_[it->second];
  }

  // All roots with a variant prefixing `word`, longest variant first.
  std::vector<RootMatch> root_prefixes(std::string_view word) const {
    std::vector<RootMatch> out;
    for_each_root_prefix(word, [&](const RootMatch& m) {
      out.push_back(m);
      return true;
    });
    return out;
  }

  // Calls fn(RootMatch) for every prefixing variant, longest first, until fn
  // returns false.
  template <class Fn>
  void for_each_root_prefix(std::string_view word, Fn&& fn) const {
    if (root_buckets_.empty()) return;
    std::size_t len = std::min(word.size(), root_buckets_.size() - 1);
    for (; len > 0; --len) {
      const auto& bucket = root_buckets_[len];
      if (bucket.empty() || !unicode::is_boundary(word, len)) continue;
      const auto it = bucket.find(word.substr(0, len));
      if (it == bucket.end()) continue;
      const RootMatch m{&roots_[it->second], word.substr(0, len), word.substr(len)};
      if (!fn(m)) return;
    }
  }

  std::optional<RootMatch> longest_root_prefix(std::string_view word) const {
    std::optional<RootMatch> best;
    for_each_root_prefix(word, [&](const RootMatch& m) {
      best = m;
      return false;
    });
    return best;
  }

  std::optional<TokenId> normalize_root_id(std::string_view surface) const {
    if (surface.empty()) return std::nullopt;
    const RootEntry* e = find_root(surface);
    if (e == nullptr) return std::nullopt;
    return e->id;
  }

  // Affix groups with an allomorph prefixing `fragment`, longest allomorph
  // first, equal lengths in document (ID) order.
  template <class Fn>
  void for_each_suffix(std::string_view fragment, Fn&& fn) const {
    if (affix_buckets_.empty()) return;
    std::size_t len = std::min(fragment.size(), affix_buckets_.size() - 1);
    for (; len > 0; --len) {
      const auto& bucket = affix_buckets_[len];
      if (bucket.empty() || !unicode::is_boundary(fragment, len)) continue;
      const auto it = bucket.find(fragment.substr(0, len));
      if (it == bucket.end()) continue;
      for (std::uint32_t g : it->second) {
        const SuffixMatch m{&affixes_[g], fragment.substr(0, len), fragment.substr(len)};
        if (!fn(m)) return;
      }
    }
  }

  std::vector<SuffixMatch> match_suffix(std::string_view fragment) const {
    std::vector<SuffixMatch> out;
    for_each_suffix(fragment, [&](const SuffixMatch& m) {
      out.push_back(m);
      return true;
    });
    return out;
  }

  // Groups listing `surface` exactly, in ID order.
  std::vector<const AffixGroup*> affixes_with(std::string_view surface) const {
    std::vector<const AffixGroup*> out;
    if (surface.size() < affix_buckets_.size()) {
      const auto& bucket = affix_buckets_[surface.size()];
      if (auto it = bucket.find(surface); it != bucket.end())
        for (std::uint32_t g : it->second) out.push_back(&affixes_[g]);
    }
    return out;
  }

  std::optional<std::size_t> char_index(std::string_view ch) const {
    const auto it = char_index_.find(ch);
    if (it == char_index_.end()) return std::nullopt;
    return it->second;
  }

  const RootEntry& root_by_id(TokenId id) const { return roots_[id - root_base()]; }
  const AffixGroup& affix_by_id(TokenId id) const { return affixes_[id - affix_base()]; }

  friend Lexicon load_lexicon(std::istream& source, std::string_view origin);

 private:
  void index();

  std::vector<SpecialToken> specials_;
  std::array<TokenId, kAllSpecialLabels.size()> special_ids_{};
  std::vector<RootEntry> roots_;
  std::vector<AffixGroup> affixes_;
  std::vector<std::string> chars_;
  PhonologyRules rules_;

  // root_buckets_[n]: variants of byte length n -> index into roots_.
  std::vector<detail::string_map<std::uint32_t>> root_buckets_;
  // affix_buckets_[n]: allomorphs of byte length n -> indices into affixes_.
  std::vector<detail::string_map<std::vector<std::uint32_t>>> affix_buckets_;
  detail::string_map<std::size_t> char_index_;
};

namespace detail {

inline std::string where(std::string_view origin, const std::string& pointer) {
  return std::string(origin) + ":" + pointer;
}

inline std::u32string letters(const nlohmann::json& j, std::string_view origin,
                              const std::string& ptr) {
  if (!j.is_string()) throw data_error(where(origin, ptr) + ": expected a string");
  return unicode::to_u32(unicode::nfc(j.get<std::string>()));
}

inline PhonologyRules parse_phonology(const nlohmann::json& j, std::string_view origin) {
  PhonologyRules r;
  if (!j.is_object()) throw data_error(where(origin, "/phonology") + ": expected an object");
  if (j.contains("vowels")) {
    const auto& v = j.at("vowels");
    if (!v.is_object()) throw data_error(where(origin, "/phonology/vowels") + ": expected an object");
    if (v.contains("front")) r.front = letters(v.at("front"), origin, "/phonology/vowels/front");
    if (v.contains("back")) r.back = letters(v.at("back"), origin, "/phonology/vowels/back");
    if (v.contains("rounded"))
      r.rounded = letters(v.at("rounded"), origin, "/phonology/vowels/rounded");
  }
  if (j.contains("harmony")) {
    const auto& h = j.at("harmony");
    if (h.contains("two_way")) r.two_way = letters(h.at("two_way"), origin, "/phonology/harmony/two_way");
    if (h.contains("four_way"))
      r.four_way = letters(h.at("four_way"), origin, "/phonology/harmony/four_way");
  }
  if (j.contains("voiceless")) r.voiceless = letters(j.at("voiceless"), origin, "/phonology/voiceless");
  if (j.contains("devoicing")) {
    for (const auto& [k, v] : j.at("devoicing").items()) {
      const std::string ptr = "/phonology/devoicing/" + k;
      const std::u32string key = unicode::to_u32(unicode::nfc(k));
      if (key.size() != 1) throw data_error(where(origin, ptr) + ": key must be one character");
      r.devoicing.emplace_back(key[0], letters(v, origin, ptr));
    }
  }
  if (j.contains("assimilation")) {
    for (const auto& [k, v] : j.at("assimilation").items()) {
      const std::string ptr = "/phonology/assimilation/" + k;
      const std::u32string key = unicode::to_u32(unicode::nfc(k));
      const std::u32string val = letters(v, origin, ptr);
      if (key.size() != 1 || val.size() != 1)
        throw data_error(where(origin, ptr) + ": expected a single character pair");
      r.assimilation.emplace_back(key[0], val[0]);
    }
  }
  if (j.contains("hiatus_triggers")) {
    for (const auto& t : j.at("hiatus_triggers")) {
      if (!t.is_string()) throw data_error(where(origin, "/phonology/hiatus_triggers") + ": expected strings");
      r.hiatus_triggers.push_back(unicode::nfc(t.get<std::string>()));
    }
  }
  return r;
}

inline std::string surface_field(const nlohmann::json& j, std::string_view origin,
                                 const std::string& ptr) {
  if (!j.is_string()) throw data_error(where(origin, ptr) + ": expected a string");
  std::string s = unicode::to_lower(unicode::nfc(j.get<std::string>()));
  if (s.empty()) throw data_error(where(origin, ptr) + ": empty surface");
  if (unicode::contains_whitespace(s))
    throw data_error(where(origin, ptr) + ": surface '" + s + "' contains whitespace");
  return s;
}

inline bool flag(const nlohmann::json& entry, const char* key, std::string_view origin,
                 const std::string& ptr) {
  if (!entry.contains(key)) return false;
  const auto& v = entry.at(key);
  if (!v.is_boolean()) throw data_error(where(origin, ptr + "/" + key) + ": expected a boolean");
  return v.get<bool>();
}

}  // namespace detail

inline void Lexicon::index() {
  std::size_t max_root = 0;
  for (const auto& r : roots_)
    for (const auto& v : r.variants) max_root = std::max(max_root, v.size());
  root_buckets_.assign(max_root + 1, {});
  for (std::uint32_t i = 0; i < roots_.size(); ++i)
    for (const auto& v : roots_[i].variants) root_buckets_[v.size()].emplace(v, i);

  std::size_t max_affix = 0;
  for (const auto& g : affixes_)
    for (const auto& a : g.allomorphs) max_affix = std::max(max_affix, a.size());
  affix_buckets_.assign(max_affix + 1, {});
  for (std::uint32_t i = 0; i < affixes_.size(); ++i) {
    auto& group = affixes_[i];
    for (const auto& a : group.allomorphs) {
      auto& ids = affix_buckets_[a.size()][a];
      if (ids.empty() || ids.back() != i) ids.push_back(i);
    }
    group.soft_role.resize(group.allomorphs.size());
    for (std::size_t k = 0; k < group.allomorphs.size(); ++k)
      group.soft_role[k] = static_cast<std::int8_t>(detail::softening_role(group, k, rules_));
  }

  char_index_.clear();
  for (std::size_t i = 0; i < chars_.size(); ++i) char_index_.emplace(chars_[i], i);
}

// Parses a lexicon document. `origin` names the source in error messages.
inline Lexicon load_lexicon(std::istream& source, std::string_view origin = "lexicon") {
  using nlohmann::json;
  using detail::where;
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw data_error(std::string(origin) + ": malformed JSON at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw data_error(std::string(origin) + ": top level must be an object");
  if (!doc.contains("format_version"))
    throw data_error(std::string(origin) + ": missing format_version");
  if (!doc.at("format_version").is_number_integer() ||
      doc.at("format_version").get<int>() != kLexiconFormatVersion)
    throw data_error(std::string(origin) + ": unsupported format_version (expected " +
                     std::to_string(kLexiconFormatVersion) + ")");

  Lexicon lex;
  TokenId next_id = 0;

  // specials
  if (!doc.contains("specials") || !doc.at("specials").is_array())
    throw data_error(where(origin, "/specials") + ": missing or not an array");
  std::array<bool, kAllSpecialLabels.size()> seen{};
  for (std::size_t i = 0; i < doc.at("specials").size(); ++i) {
    const auto& item = doc.at("specials")[i];
    const std::string ptr = "/specials/" + std::to_string(i);
    if (!item.is_string()) throw data_error(where(origin, ptr) + ": expected a label string");
    const auto label = parse_label(item.get<std::string>());
    if (!label) throw data_error(where(origin, ptr) + ": unknown special '" + item.get<std::string>() + "'");
    const auto slot = static_cast<std::size_t>(*label);
    if (seen[slot])
      throw data_error(where(origin, ptr) + ": duplicate special '" + item.get<std::string>() + "'");
    seen[slot] = true;
    lex.special_ids_[slot] = next_id;
    lex.specials_.push_back({next_id++, *label});
  }
  for (SpecialLabel label : kAllSpecialLabels)
    if (!seen[static_cast<std::size_t>(label)])
      throw data_error(where(origin, "/specials") + ": missing special '" +
                       std::string(label_name(label)) + "'");

  if (doc.contains("phonology")) lex.rules_ = detail::parse_phonology(doc.at("phonology"), origin);

  // roots
  detail::string_map<std::string> root_owner;  // surface -> pointer of first owner
  if (doc.contains("roots")) {
    const auto& roots = doc.at("roots");
    if (!roots.is_array()) throw data_error(where(origin, "/roots") + ": expected an array");
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto& item = roots[i];
      const std::string ptr = "/roots/" + std::to_string(i);
      if (!item.is_object() || !item.contains("canonical"))
        throw data_error(where(origin, ptr) + ": expected an object with 'canonical'");
      RootEntry entry;
      entry.id = next_id;
      entry.canonical = detail::surface_field(item.at("canonical"), origin, ptr + "/canonical");
      entry.variants.push_back(entry.canonical);
      if (item.contains("variants")) {
        const auto& vs = item.at("variants");
        if (!vs.is_array()) throw data_error(where(origin, ptr + "/variants") + ": expected an array");
        for (std::size_t k = 0; k < vs.size(); ++k) {
          std::string v = detail::surface_field(vs[k], origin, ptr + "/variants/" + std::to_string(k));
          if (!entry.has_variant(v)) entry.variants.push_back(std::move(v));
        }
      }
      entry.compound = detail::flag(item, "compound", origin, ptr);
      entry.functional = detail::flag(item, "functional", origin, ptr);
      entry.haplology = detail::flag(item, "haplology", origin, ptr);
      entry.hiatus = detail::flag(item, "hiatus", origin, ptr);
      for (const auto& v : entry.variants) {
        if (auto it = root_owner.find(v); it != root_owner.end())
          throw data_error(where(origin, ptr) + ": duplicate root surface '" + v +
                           "' (entry '" + entry.canonical + "', first defined at " + it->second + ")");
        root_owner.emplace(v, ptr);
      }
      lex.roots_.push_back(std::move(entry));
      ++next_id;
    }
  }

  // affixes
  if (doc.contains("affixes")) {
    const auto& affixes = doc.at("affixes");
    if (!affixes.is_array()) throw data_error(where(origin, "/affixes") + ": expected an array");
    detail::string_map<std::string> pair_owner;  // function + '\0' + surface
    for (std::size_t i = 0; i < affixes.size(); ++i) {
      const auto& item = affixes[i];
      const std::string ptr = "/affixes/" + std::to_string(i);
      if (!item.is_object() || !item.contains("function") || !item.contains("allomorphs"))
        throw data_error(where(origin, ptr) + ": expected an object with 'function' and 'allomorphs'");
      if (!item.at("function").is_string() || item.at("function").get<std::string>().empty())
        throw data_error(where(origin, ptr + "/function") + ": expected a non-empty string");
      AffixGroup group;
      group.id = next_id;
      group.function = item.at("function").get<std::string>();
      const auto& al = item.at("allomorphs");
      if (!al.is_array() || al.empty())
        throw data_error(where(origin, ptr + "/allomorphs") + ": expected a non-empty array");
      for (std::size_t k = 0; k < al.size(); ++k) {
        std::string a = detail::surface_field(al[k], origin, ptr + "/allomorphs/" + std::to_string(k));
        if (group.has_allomorph(a)) continue;
        const std::string key = group.function + '\0' + a;
        if (auto it = pair_owner.find(key); it != pair_owner.end())
          throw data_error(where(origin, ptr) + ": allomorph '" + a + "' of " + group.function +
                           " already defined at " + it->second);
        pair_owner.emplace(key, ptr);
        group.allomorphs.push_back(std::move(a));
      }
      if (group.allomorphs.size() > 64)
        throw data_error(where(origin, ptr) + ": more than 64 allomorphs in " + group.function);
      lex.affixes_.push_back(std::move(group));
      ++next_id;
    }
  }

  // chars
  if (doc.contains("chars")) {
    const auto& chars = doc.at("chars");
    if (!chars.is_array()) throw data_error(where(origin, "/chars") + ": expected an array");
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const std::string ptr = "/chars/" + std::to_string(i);
      if (!chars[i].is_string()) throw data_error(where(origin, ptr) + ": expected a string");
      std::string c = unicode::nfc(chars[i].get<std::string>());
      if (unicode::cp_count(c) != 1)
        throw data_error(where(origin, ptr) + ": '" + c + "' is not a single character");
      if (std::find(lex.chars_.begin(), lex.chars_.end(), c) != lex.chars_.end())
        throw data_error(where(origin, ptr) + ": duplicate character '" + c + "'");
      lex.chars_.push_back(std::move(c));
    }
  }

  if (lex.size() > kVocabularyBudget)
    throw data_error(std::string(origin) + ": vocabulary budget exceeded (" +
                     std::to_string(lex.size()) + " > " + std::to_string(kVocabularyBudget) + ")");
  lex.index();
  return lex;
}

inline Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open lexicon '" + path + "'");
  return load_lexicon(in, path);
}

inline Lexicon load_lexicon_string(std::string_view text, std::string_view origin = "lexicon") {
  std::istringstream in{std::string(text)};
  return load_lexicon(in, origin);
}

}  // namespace morphtok
