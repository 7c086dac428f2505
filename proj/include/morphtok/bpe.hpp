#pragma once

// Byte-pair encoding over Unicode scalar values, used as the fallback
// segmenter for words the lexicon cannot cover.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "morphtok/error.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/unicode.hpp"

namespace morphtok {

inline constexpr int kBpeFormatVersion = 1;

using MergeRule = std::pair<std::string, std::string>;

class BpeModel {
 public:
  BpeModel() = default;

  // Builds a model from an ordered alphabet and ranked merges. Every merge
  // must combine symbols that already exist when it is applied.
  static BpeModel from_merges(std::vector<std::string> alphabet, std::vector<MergeRule> merges,
                              std::size_t target_size, std::string_view origin = "bpe") {
    BpeModel m;
    m.target_size_ = target_size;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (unicode::cp_count(alphabet[i]) != 1)
        throw data_error(std::string(origin) + ":/alphabet/" + std::to_string(i) + ": '" +
                         alphabet[i] + "' is not a single character");
      if (m.index_.contains(alphabet[i]))
        throw data_error(std::string(origin) + ":/alphabet/" + std::to_string(i) +
                         ": duplicate symbol '" + alphabet[i] + "'");
      m.add_symbol(alphabet[i]);
    }
    m.alphabet_ = std::move(alphabet);
    for (std::size_t r = 0; r < merges.size(); ++r) {
      const auto& [left, right] = merges[r];
      const auto l = m.index_of(left);
      const auto rr = m.index_of(right);
      if (!l || !rr)
        throw data_error(std::string(origin) + ":/merges/" + std::to_string(r) +
                         ": merge references unknown symbol ('" + left + "', '" + right + "')");
      const std::uint32_t result = m.add_symbol(left + right);
      m.ranks_.emplace(key(*l, *rr), Rank{static_cast<std::uint32_t>(r), result});
    }
    m.merges_ = std::move(merges);
    return m;
  }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<MergeRule>& merges() const { return merges_; }
  // Subwords in ID order: alphabet first, then merge results by rank.
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }
  std::size_t target_size() const { return target_size_; }
  bool empty() const { return vocab_.empty(); }

  std::optional<std::uint32_t> index_of(std::string_view subword) const {
    const auto it = index_.find(subword);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Splits `word` into subwords by applying merges in rank order. The pieces
  // are views into `word` and concatenate back to it. Characters outside the
  // alphabet come out as single-character pieces.
  std::vector<std::string_view> segment(std::string_view word) const {
    struct Sym {
      std::size_t begin, end;
      std::int64_t id;  // -1: not in vocab
    };
    std::vector<Sym> syms;
    syms.reserve(word.size());
    for (std::size_t i = 0; i < word.size();) {
      const std::size_t b = i;
      unicode::next_cp(word, i);
      const auto id = index_of(word.substr(b, i - b));
      syms.push_back({b, i, id ? static_cast<std::int64_t>(*id) : -1});
    }
    while (syms.size() > 1) {
      std::uint32_t best_rank = UINT32_MAX;
      std::uint64_t best_key = 0;
      std::uint32_t best_result = 0;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        if (syms[i].id < 0 || syms[i + 1].id < 0) continue;
        const auto k = key(static_cast<std::uint32_t>(syms[i].id),
                           static_cast<std::uint32_t>(syms[i + 1].id));
        const auto it = ranks_.find(k);
        if (it != ranks_.end() && it->second.rank < best_rank) {
          best_rank = it->second.rank;
          best_key = k;
          best_result = it->second.result;
        }
      }
      if (best_rank == UINT32_MAX) break;
      std::vector<Sym> next;
      next.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size(); ++i) {
        if (i + 1 < syms.size() && syms[i].id >= 0 && syms[i + 1].id >= 0 &&
            key(static_cast<std::uint32_t>(syms[i].id),
                static_cast<std::uint32_t>(syms[i + 1].id)) == best_key) {
          next.push_back({syms[i].begin, syms[i + 1].end, best_result});
          ++i;
        } else {
          next.push_back(syms[i]);
        }
      }
      syms.swap(next);
    }
    std::vector<std::string_view> out;
    out.reserve(syms.size());
    for (const auto& s : syms) out.push_back(word.substr(s.begin, s.end - s.begin));
    return out;
  }

 private:
  struct Rank {
    std::uint32_t rank;
    std::uint32_t result;
  };

  static std::uint64_t key(std::uint32_t l, std::uint32_t r) {
    return (std::uint64_t{l} << 32) | r;
  }

  std::uint32_t add_symbol(const std::string& s) {
    if (auto it = index_.find(s); it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(vocab_.size());
    vocab_.push_back(s);
    index_.emplace(s, id);
    return id;
  }

  std::vector<std::string> alphabet_;
  std::vector<MergeRule> merges_;
  std::vector<std::string> vocab_;
  detail::string_map<std::uint32_t> index_;
  std::unordered_map<std::uint64_t, Rank> ranks_;
  std::size_t target_size_ = 0;
};

inline std::vector<std::string_view> bpe_segment(std::string_view word, const BpeModel& model) {
  return model.segment(word);
}

using WordCounts = std::vector<std::pair<std::string, std::uint64_t>>;

// Classic BPE training: repeatedly merge the most frequent adjacent pair
// (ties: smallest (left, right) in byte order) until the vocabulary reaches
// `target_size` or no pair occurs at least twice.
inline BpeModel train_bpe(const WordCounts& corpus, std::size_t target_size) {
  std::map<std::string, std::uint64_t> merged_counts;
  for (const auto& [w, c] : corpus)
    if (!w.empty() && c > 0) merged_counts[w] += c;
  if (merged_counts.empty()) throw data_error("train_bpe: empty corpus");

  std::set<std::string> alphabet_set;
  for (const auto& [w, c] : merged_counts)
    for (std::size_t i = 0; i < w.size();) {
      const std::size_t b = i;
      unicode::next_cp(w, i);
      alphabet_set.insert(w.substr(b, i - b));
    }
  if (target_size == 0 || target_size < alphabet_set.size())
    throw data_error("train_bpe: target size " + std::to_string(target_size) +
                     " is below the alphabet size " + std::to_string(alphabet_set.size()));

  std::deque<std::string> symbols;  // stable storage for views in the queue
  detail::string_map<std::uint32_t> symbol_ids;
  auto intern = [&](std::string s) {
    if (auto it = symbol_ids.find(s); it != symbol_ids.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(symbols.size());
    symbols.push_back(std::move(s));
    symbol_ids.emplace(symbols.back(), id);
    return id;
  };
  std::vector<std::string> alphabet(alphabet_set.begin(), alphabet_set.end());
  for (const auto& a : alphabet) intern(a);

  struct Word {
    std::vector<std::uint32_t> syms;
    std::uint64_t count;
  };
  std::vector<Word> words;
  words.reserve(merged_counts.size());
  for (const auto& [w, c] : merged_counts) {
    Word word{{}, c};
    for (std::size_t i = 0; i < w.size();) {
      const std::size_t b = i;
      unicode::next_cp(w, i);
      word.syms.push_back(symbol_ids.find(w.substr(b, i - b))->second);
    }
    words.push_back(std::move(word));
  }

  auto pair_key = [](std::uint32_t l, std::uint32_t r) { return (std::uint64_t{l} << 32) | r; };
  struct Entry {
    std::int64_t count;
    std::uint32_t left, right;
  };
  // Priority: highest count, then smallest (left, right) strings.
  auto better = [&symbols](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.left != b.left) {
      const int c = symbols[a.left].compare(symbols[b.left]);
      if (c != 0) return c < 0;
    }
    return symbols[a.right] < symbols[b.right];
  };
  std::set<Entry, decltype(better)> queue(better);
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where;

  auto adjust = [&](std::uint32_t l, std::uint32_t r, std::int64_t delta) {
    const auto k = pair_key(l, r);
    auto& c = counts[k];
    if (c > 0) queue.erase(Entry{c, l, r});
    c += delta;
    if (c > 0) queue.insert(Entry{c, l, r});
  };

  for (std::uint32_t wi = 0; wi < words.size(); ++wi) {
    const auto& w = words[wi];
    for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
      adjust(w.syms[i], w.syms[i + 1], static_cast<std::int64_t>(w.count));
      where[pair_key(w.syms[i], w.syms[i + 1])].push_back(wi);
    }
  }

  std::vector<MergeRule> merges;
  std::vector<std::uint32_t> stamp(words.size(), UINT32_MAX);
  while (symbols.size() < target_size && !queue.empty()) {
    const Entry best = *queue.begin();
    if (best.count < 2) break;
    const auto round = static_cast<std::uint32_t>(merges.size());
    merges.emplace_back(symbols[best.left], symbols[best.right]);
    const std::uint32_t merged = intern(symbols[best.left] + symbols[best.right]);
    const auto bk = pair_key(best.left, best.right);
    const std::vector<std::uint32_t> touched = std::move(where[bk]);
    where.erase(bk);
    for (std::uint32_t wi : touched) {
      if (stamp[wi] == round) continue;
      stamp[wi] = round;
      auto& w = words[wi];
      bool present = false;
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i)
        if (w.syms[i] == best.left && w.syms[i + 1] == best.right) {
          present = true;
          break;
        }
      if (!present) continue;
      const auto c = static_cast<std::int64_t>(w.count);
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) adjust(w.syms[i], w.syms[i + 1], -c);
      std::vector<std::uint32_t> next;
      next.reserve(w.syms.size());
      for (std::size_t i = 0; i < w.syms.size(); ++i) {
        if (i + 1 < w.syms.size() && w.syms[i] == best.left && w.syms[i + 1] == best.right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(w.syms[i]);
        }
      }
      w.syms.swap(next);
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
        adjust(w.syms[i], w.syms[i + 1], c);
        where[pair_key(w.syms[i], w.syms[i + 1])].push_back(wi);
      }
    }
  }
  return BpeModel::from_merges(std::move(alphabet), std::move(merges), target_size);
}

// Deterministic serialization: identical models give identical bytes.
inline std::string save_bpe(const BpeModel& model) {
  using nlohmann::json;
  std::string out = "{\n  \"format_version\": " + std::to_string(kBpeFormatVersion) +
                    ",\n  \"target_size\": " + std::to_string(model.target_size()) +
                    ",\n  \"alphabet\": [";
  for (std::size_t i = 0; i < model.alphabet().size(); ++i) {
    if (i) out += ", ";
    out += json(model.alphabet()[i]).dump();
  }
  out += "],\n  \"merges\": [";
  for (std::size_t i = 0; i < model.merges().size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += "[" + json(model.merges()[i].first).dump() + ", " +
           json(model.merges()[i].second).dump() + "]";
  }
  out += model.merges().empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

inline BpeModel load_bpe(std::istream& source, std::string_view origin = "bpe") {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw data_error(std::string(origin) + ": malformed JSON at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") ||
      !doc.at("format_version").is_number_integer() ||
      doc.at("format_version").get<int>() != kBpeFormatVersion)
    throw data_error(std::string(origin) + ": missing or unsupported format_version");
  std::vector<std::string> alphabet;
  std::vector<MergeRule> merges;
  try {
    for (const auto& a : doc.at("alphabet")) alphabet.push_back(unicode::nfc(a.get<std::string>()));
    for (const auto& m : doc.at("merges")) {
      if (!m.is_array() || m.size() != 2)
        throw data_error(std::string(origin) + ":/merges: each merge must be a [left, right] pair");
      merges.emplace_back(unicode::nfc(m[0].get<std::string>()),
                          unicode::nfc(m[1].get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw data_error(std::string(origin) + ": " + e.what());
  }
  std::size_t target = 0;
  if (doc.contains("target_size") && doc.at("target_size").is_number_unsigned())
    target = doc.at("target_size").get<std::size_t>();
  else
    target = alphabet.size() + merges.size();
  return BpeModel::from_merges(std::move(alphabet), std::move(merges), target, origin);
}

inline BpeModel load_bpe_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open BPE model '" + path + "'");
  return load_bpe(in, path);
}

}  // namespace morphtok
