#pragma once

// Linguistic-alignment metrics over token dumps: total/unique counts, the
// share of unique tokens that are valid Turkish morphemes or morpheme chains
// (TR%), the share that are exactly one morpheme (Pure%), and throughput.
// Validity is judged against a lexicon, so it approximates a human judgment.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "morphtok/error.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/types.hpp"
#include "morphtok/unicode.hpp"

namespace morphtok {

struct TokenDump {
  std::string tokenizer;
  std::vector<std::string> tokens;
  std::optional<double> elapsed_seconds;
  std::optional<std::size_t> vocab_size;
};

struct Judgment {
  bool turkish = false;
  bool pure = false;
  friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct MetricsReport {
  std::string tokenizer;
  std::optional<std::size_t> vocab_size;
  std::size_t total = 0;
  std::size_t unique = 0;
  std::size_t turkish = 0;
  std::size_t pure = 0;
  // Percentages in hundredths of a percent, rounded half up (9029 = 90.29%).
  std::int64_t tr_hundredths = 0;
  std::int64_t pure_hundredths = 0;
  std::optional<double> elapsed_seconds;
  std::optional<double> tokens_per_second;

  double tr_pct() const { return static_cast<double>(tr_hundredths) / 100.0; }
  double pure_pct() const { return static_cast<double>(pure_hundredths) / 100.0; }
};

// 100 * count / whole, in hundredths, rounded half up; exact integer math.
inline std::int64_t percent_hundredths(std::size_t count, std::size_t whole) {
  if (whole == 0) throw data_error("percentage of zero unique tokens is undefined");
  const auto c = static_cast<std::uint64_t>(count);
  const auto w = static_cast<std::uint64_t>(whole);
  return static_cast<std::int64_t>((2 * c * 10000 + w) / (2 * w));
}

// "90.29"
inline std::string format_hundredths(std::int64_t h) {
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(frac.begin(), '0');
  return std::to_string(h / 100) + "." + frac;
}

// Tokenizer-specific decorations removed before judging.
struct AdapterConfig {
  std::vector<std::string> prefixes = {"\xE2\x96\x81" /* ▁ */, "\xC4\xA0" /* Ġ */, " ", "##"};
  std::vector<std::string> sentinels = {"<bos>", "<eos>", "<s>", "</s>", "<|begin_of_text|>",
                                        "<|end_of_text|>", "<BOS_TOKEN>", "<EOS_TOKEN>", "<pad>"};
};

// Strips leading word-boundary markers; nothing for sentinels and tokens that
// are empty once stripped.
inline std::optional<std::string> strip_markers(std::string_view token,
                                                const AdapterConfig& cfg = {}) {
  for (const auto& s : cfg.sentinels)
    if (token == s) return std::nullopt;
  for (bool changed = true; changed && !token.empty();) {
    changed = false;
    for (const auto& p : cfg.prefixes)
      if (!p.empty() && token.starts_with(p)) {
        token.remove_prefix(p.size());
        changed = true;
      }
  }
  if (token.empty()) return std::nullopt;
  return std::string(token);
}

namespace detail {

// `s` splits into registered allomorphs (no phonology check).
inline bool chain_covers(std::string_view s, const Lexicon& lex) {
  std::vector<char> ok(s.size() + 1, 0);
  ok[s.size()] = 1;
  for (std::size_t p = s.size(); p-- > 0;) {
    if (!unicode::is_boundary(s, p)) continue;
    lex.for_each_suffix(s.substr(p), [&](const SuffixMatch& m) {
      if (ok[p + m.allomorph.size()]) {
        ok[p] = 1;
        return false;
      }
      return true;
    });
  }
  return ok[0] != 0;
}

}  // namespace detail

// Turkish: a root variant, an allomorph, a registered char or special, a root
// followed by a full suffix chain, or a suffix chain that starts with a
// consonant (so fused suffixes like "lerdir" count, stray vowel fragments
// like "ümü" do not). Pure: exactly one root variant or one allomorph.
inline Judgment judge_token(std::string_view surface, const Lexicon& lex) {
  if (parse_special_surface(surface)) return {true, false};
  const std::string s = unicode::to_lower(unicode::nfc(surface));
  if (s.empty()) return {};
  if (lex.find_root(s) != nullptr || !lex.affixes_with(s).empty()) return {true, true};
  if (lex.char_index(s)) return {true, false};
  bool chained = false;
  lex.for_each_root_prefix(s, [&](const RootMatch& m) {
    chained = detail::chain_covers(m.remainder, lex);
    return !chained;
  });
  if (chained) return {true, false};
  if (!lex.rules().is_vowel(unicode::first_cp(s)) && detail::chain_covers(s, lex)) return {true, false};
  return {};
}

inline MetricsReport compute_metrics(const TokenDump& dump, const Lexicon& lex) {
  MetricsReport r;
  r.tokenizer = dump.tokenizer;
  r.vocab_size = dump.vocab_size;
  r.total = dump.tokens.size();
  std::unordered_set<std::string_view> seen;
  seen.reserve(dump.tokens.size());
  for (const auto& t : dump.tokens) {
    if (!seen.insert(t).second) continue;
    const Judgment j = judge_token(t, lex);
    r.turkish += j.turkish;
    r.pure += j.pure;
  }
  r.unique = seen.size();
  if (r.unique == 0)
    throw data_error("tokenizer '" + dump.tokenizer + "': no tokens, percentages are undefined");
  r.tr_hundredths = percent_hundredths(r.turkish, r.unique);
  r.pure_hundredths = percent_hundredths(r.pure, r.unique);
  r.elapsed_seconds = dump.elapsed_seconds;
  if (dump.elapsed_seconds && *dump.elapsed_seconds > 0)
    r.tokens_per_second = static_cast<double>(r.total) / *dump.elapsed_seconds;
  return r;
}

// One report per dump, highest TR% first; ties keep input order.
inline std::vector<MetricsReport> compare(const std::vector<TokenDump>& dumps, const Lexicon& lex) {
  if (dumps.empty()) throw data_error("compare: no token dumps given");
  std::vector<MetricsReport> rows;
  rows.reserve(dumps.size());
  for (const auto& d : dumps) {
    try {
      rows.push_back(compute_metrics(d, lex));
    } catch (const data_error& e) {
      throw data_error("tokenizer '" + d.tokenizer + "': " + e.what());
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsReport& a, const MetricsReport& b) {
    return a.tr_hundredths > b.tr_hundredths;
  });
  return rows;
}

inline std::string format_table(const std::vector<MetricsReport>& rows) {
  const std::vector<std::string> head = {"Tokenizer", "Vocab",   "Total", "Time (s)", "Unique",
                                         "Turkish",   "TR %",    "Pure",  "Pure %",   "Tokens/s"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    auto fixed = [](double v, int prec) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(prec) << v;
      return os.str();
    };
    cells.push_back({r.tokenizer, r.vocab_size ? std::to_string(*r.vocab_size) : "-",
                     std::to_string(r.total),
                     r.elapsed_seconds ? fixed(*r.elapsed_seconds, 4) : "-",
                     std::to_string(r.unique), std::to_string(r.turkish),
                     format_hundredths(r.tr_hundredths), std::to_string(r.pure),
                     format_hundredths(r.pure_hundredths),
                     r.tokens_per_second ? fixed(*r.tokens_per_second, 0) : "-"});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = unicode::cp_count(head[c]);
    for (const auto& row : cells) width[c] = std::max(width[c], unicode::cp_count(row[c]));
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - unicode::cp_count(row[c]), ' ');
      if (c) out += "  ";
      out += c == 0 ? row[c] + pad : pad + row[c];  // names left, numbers right
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(head);
  std::size_t rule = 0;
  for (std::size_t w : width) rule += w;
  out += std::string(rule + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& row : cells) out += line(row);
  return out;
}

inline nlohmann::ordered_json report_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["tokenizer"] = r.tokenizer;
  j["vocab_size"] = r.vocab_size ? nlohmann::ordered_json(*r.vocab_size) : nlohmann::ordered_json();
  j["total"] = r.total;
  j["elapsed_seconds"] = r.elapsed_seconds ? nlohmann::ordered_json(*r.elapsed_seconds) : nlohmann::ordered_json();
  j["unique"] = r.unique;
  j["turkish"] = r.turkish;
  j["tr_pct"] = r.tr_pct();
  j["pure"] = r.pure;
  j["pure_pct"] = r.pure_pct();
  j["tokens_per_second"] =
      r.tokens_per_second ? nlohmann::ordered_json(*r.tokens_per_second) : nlohmann::ordered_json();
  return j;
}

inline std::string format_json(const std::vector<MetricsReport>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

// Reads JSON-lines dump records {tokenizer, tokens[], elapsed_seconds?,
// vocab_size?}. Records with the same tokenizer name are concatenated (times
// summed), in order of first appearance. Blank lines are skipped.
inline std::vector<TokenDump> read_dumps(std::istream& in, std::string_view origin = "dump",
                                         const AdapterConfig& adapter = {}) {
  using nlohmann::json;
  std::vector<TokenDump> dumps;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw data_error(where + ": malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("tokenizer") || !rec.at("tokenizer").is_string() ||
        !rec.contains("tokens") || !rec.at("tokens").is_array())
      throw data_error(where + ": expected {\"tokenizer\": string, \"tokens\": [...]}");
    const auto name = rec.at("tokenizer").get<std::string>();
    auto it = std::find_if(dumps.begin(), dumps.end(),
                           [&](const TokenDump& d) { return d.tokenizer == name; });
    if (it == dumps.end()) {
      dumps.push_back({name, {}, std::nullopt, std::nullopt});
      it = std::prev(dumps.end());
    }
    for (const auto& t : rec.at("tokens")) {
      if (!t.is_string()) throw data_error(where + ": tokens must be strings");
      if (auto s = strip_markers(t.get_ref<const std::string&>(), adapter))
        it->tokens.push_back(std::move(*s));
    }
    if (rec.contains("elapsed_seconds")) {
      const auto& e = rec.at("elapsed_seconds");
      if (!e.is_number() || e.get<double>() < 0)
        throw data_error(where + ": elapsed_seconds must be a non-negative number");
      it->elapsed_seconds = it->elapsed_seconds.value_or(0.0) + e.get<double>();
    }
    if (rec.contains("vocab_size")) {
      const auto& v = rec.at("vocab_size");
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
        throw data_error(where + ": vocab_size must be a positive integer");
      it->vocab_size = v.get<std::size_t>();
    }
  }
  return dumps;
}

inline std::vector<TokenDump> read_dumps_file(const std::string& path,
                                              const AdapterConfig& adapter = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open token dump '" + path + "'");
  return read_dumps(in, path, adapter);
}

}  // namespace morphtok
