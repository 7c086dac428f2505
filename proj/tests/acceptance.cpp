// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// check fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "morphtok/bpe.hpp"
#include "morphtok/cli.hpp"
#include "morphtok/decoder.hpp"
#include "morphtok/encoder.hpp"
#include "morphtok/metrics.hpp"
#include "morphtok/phonology.hpp"
#include "morphtok/synthetic.hpp"
#include "support/bpe_oracle.hpp"
#include "support/fixture.hpp"
#include "support/segmentation_oracle.hpp"
#include "support/published_counts.hpp"

using namespace morphtok;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << " -- " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s + "]";
}

std::vector<std::string> surfaces_of(const std::string& text, const Vocabulary& v) {
  return token_surfaces(encode(text, v).ids, v);
}

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

TokenId group_id(const Vocabulary& v, const std::string& function) {
  for (const auto& g : v.lexicon().affixes())
    if (g.function == function) return g.id;
  return UINT32_MAX;
}

bool contains(const std::vector<TokenId>& ids, TokenId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void golden_sentence_1(const Vocabulary& v) {
  const std::string text = "Kalktığımızda hep birlikte yürüdük.";
  const std::vector<std::string> expected = {"<uppercase>", "kalk", "tığ", "ımız", "da", "<space>",
                                             "hep", "<space>", "birlikte", "<space>", "yürü", "dü",
                                             "k", "."};
  const auto got = surfaces_of(text, v);
  constexpr int kRuns = 1000;
  const auto t0 = Clock::now();
  std::size_t sink = 0;
  for (int i = 0; i < kRuns; ++i) sink += encode(text, v).size();
  const double per_call_ms = seconds_since(t0) * 1000.0 / kRuns;
  const bool ok = got == expected && per_call_ms < 1.0 && sink == kRuns * expected.size();
  report(ok, "golden-sentence-1",
         "got " + join(got) + "; mean encode time " + std::to_string(per_call_ms) +
             " ms over 1000 runs (limit 1 ms)");
}

void golden_sentence_2(const Vocabulary& v) {
  const std::vector<std::string> surfaces = {"<uppercase>", "kitap", "<space>", "okuma", "yı",
                                             "<space>", "sev", "i", "yor", "um", "."};
  const auto ids = parse_surfaces(surfaces, v);
  const std::string text = decode(ids, v);
  report(text == "Kitap okumayı seviyorum.", "golden-sentence-2", "decoded \"" + text + "\"");
}

void case_study(const Vocabulary& v) {
  const std::string text =
      "Atasözleri geçmişten günümüze kadar ulaşan anlamı bakımından mecazlı bir mana kazanan "
      "kalıplaşmış sözlerdir.";
  const auto got = surfaces_of(text, v);
  const std::vector<std::string> prefix = {"<uppercase>", "atasöz", "ler", "i", "<space>", "geçmiş", "ten"};
  const bool has_prefix = got.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), got.begin());
  const bool ok = has_prefix && contains_run(got, {"kalıp", "laş", "mış"}) && contains_run(got, {"mecaz", "lı"});
  report(ok, "case-study-prefix", "got " + join(got));
}

void published_counts_arithmetic() {
  const auto inj = testing::inject({11144, 10062, 9562});
  const MetricsReport r = compute_metrics(inj.dump, inj.lexicon);
  const std::string tr = format_hundredths(r.tr_hundredths);
  const std::string pure = format_hundredths(r.pure_hundredths);
  const bool ok = r.unique == 11144 && r.turkish == 10062 && r.pure == 9562 && tr == "90.29" &&
                  pure == "85.80";
  report(ok, "published-counts-arithmetic",
         "unique=" + std::to_string(r.unique) + " turkish=" + std::to_string(r.turkish) +
             " pure=" + std::to_string(r.pure) + " tr_pct=" + tr + " pure_pct=" + pure);
}

void round_trip(const Vocabulary& v) {
  SentenceGenerator gen(v, 20240601);
  std::vector<std::string> sentences;
  for (int i = 0; i < 1000; ++i) {
    // Join a few sentences with random whitespace so runs and capitals vary.
    std::string s = gen.sentence();
    if (i % 3 == 0) s += (i % 2 ? "\n\n" : "  ") + gen.sentence();
    sentences.push_back(std::move(s));
  }
  const auto t0 = Clock::now();
  int failed = 0;
  std::string first_failure;
  for (const auto& s : sentences) {
    const std::string back = decode(encode(s, v).ids, v);
    if (back != s) {
      if (failed++ == 0) first_failure = "\"" + s + "\" -> \"" + back + "\"";
    }
  }
  const double secs = seconds_since(t0);
  report(failed == 0 && secs < 5.0, "round-trip",
         std::to_string(sentences.size()) + " sentences, " + std::to_string(failed) +
             " failures, " + std::to_string(secs) + " s (limit 5 s)" +
             (failed ? "; first: " + first_failure : ""));
}

void phonology_suite(const Vocabulary& v) {
  const Lexicon& lex = v.lexicon();
  const auto kitap = lex.normalize_root_id("kitap");
  const auto kitab = lex.normalize_root_id("kitab");
  const auto alin = lex.normalize_root_id("alın");
  const auto aln = lex.normalize_root_id("aln");
  const RootEntry* kitap_entry = lex.find_root("kitap");
  const RootEntry* oyna_entry = lex.find_root("oyna");
  const std::string r1 = kitap_entry ? std::string(realize_root(*kitap_entry, "ı", v.rules())) : "";
  const std::string r2 = oyna_entry ? std::string(realize_root(*oyna_entry, "yor", v.rules())) : "";
  const bool ok = kitap && kitap == kitab && r1 == "kitab" && r2 == "oynu" && alin && alin == aln;
  report(ok, "phonology-suite",
         "id(kitap)=" + (kitap ? std::to_string(*kitap) : "none") +
             " id(kitab)=" + (kitab ? std::to_string(*kitab) : "none") + " realize_root(kitap, ı)=" +
             r1 + " realize_root(oyna, yor)=" + r2 + " id(alın)=" + (alin ? std::to_string(*alin) : "none") +
             " id(aln)=" + (aln ? std::to_string(*aln) : "none"));
}

void allomorph_sharing(const Vocabulary& v) {
  const TokenId plural = group_id(v, "PLURAL");
  const TokenId ablative = group_id(v, "ABLATIVE");
  const auto evler = encode("evler", v).ids;
  const auto kitaplar = encode("kitaplar", v).ids;
  const auto evden = encode("evden", v).ids;
  const auto kitaptan = encode("kitaptan", v).ids;
  const bool ok = contains(evler, plural) && contains(kitaplar, plural) && contains(evden, ablative) &&
                  contains(kitaptan, ablative);
  auto show = [&](const std::vector<TokenId>& ids) {
    std::string s;
    for (auto id : ids) s += (s.empty() ? "" : " ") + std::to_string(id);
    return "[" + s + "]";
  };
  report(ok, "allomorph-sharing",
         "PLURAL=" + std::to_string(plural) + " evler=" + show(evler) + " kitaplar=" + show(kitaplar) +
             "; ABLATIVE=" + std::to_string(ablative) + " evden=" + show(evden) +
             " kitaptan=" + show(kitaptan));
}

void bpe_oracle() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  std::vector<BpeModel> models;
  for (const auto& [name, corpus, target] :
       {std::tuple{"english", testing::toy_corpus_english(), std::size_t{30}},
        std::tuple{"turkish", testing::toy_corpus_turkish(), std::size_t{120}}}) {
    const BpeModel m = train_bpe(corpus, target);
    const auto ref = testing::brute_force_bpe(corpus, target);
    const bool same = m.merges() == ref.merges && m.alphabet() == ref.alphabet;
    ok = ok && same;
    detail += std::string(name) + ": " + std::to_string(m.merges().size()) + " merges " +
              (same ? "match" : "DIFFER") + "; ";
    models.push_back(m);
  }
  std::mt19937_64 rng(7);
  const std::vector<std::string> alphabet = {"a", "e", "ı", "i", "o", "ö", "u", "ü", "l", "r",
                                             "k", "t", "d", "s", "ş", "ç", "ğ", "n", "m", "w", "x"};
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string w;
    const int len = 1 + static_cast<int>(rng() % 14);
    for (int k = 0; k < len; ++k) w += alphabet[rng() % alphabet.size()];
    const BpeModel& m = models[static_cast<std::size_t>(i) % models.size()];
    std::string joined;
    const auto pieces = m.segment(w);
    for (auto p : pieces) joined += p;
    const auto ref = testing::brute_force_segment(w, m.merges());
    const bool same = joined == w && std::equal(pieces.begin(), pieces.end(), ref.begin(), ref.end());
    bad += !same;
  }
  const double secs = seconds_since(t0);
  ok = ok && bad == 0 && secs < 10.0;
  report(ok, "bpe-oracle",
         detail + "10000 random strings, " + std::to_string(bad) + " reconstruction/oracle mismatches, " +
             std::to_string(secs) + " s (limit 10 s)");
}

void segmentation_oracle() {
  const auto t0 = Clock::now();
  const Vocabulary v = testing::micro_vocabulary();
  const auto words = testing::micro_words(v);
  std::size_t bad = 0;
  std::string first;
  for (const auto& w : words) {
    const auto got = encode_word(w, v);
    const auto want = testing::oracle_segment(w, v);
    if (got != want && bad++ == 0) first = w;
  }
  const double secs = seconds_since(t0);
  report(bad == 0 && secs < 60.0, "segmentation-oracle",
         std::to_string(v.lexicon().roots().size() + v.lexicon().affixes().size()) +
             "-entry lexicon, " + std::to_string(words.size()) + " words (<= 12 chars), " +
             std::to_string(bad) + " mismatches" + (bad ? " (first: " + first + ")" : "") + ", " +
             std::to_string(secs) + " s (limit 60 s)");
}

void throughput(const Vocabulary& v) {
  const std::string corpus = SentenceGenerator(v, 1).corpus(1'600'000);
  const TokenDump dump = cli::self_dump(corpus, v, 1);
  const double secs = dump.elapsed_seconds.value_or(0);
  const double rate = secs > 0 ? static_cast<double>(dump.tokens.size()) / secs : 0;
  std::ostringstream os;
  os << unicode::cp_count(corpus) << " chars, " << dump.tokens.size() << " tokens in " << secs
     << " s = " << static_cast<long long>(rate) << " tokens/s (hard floor 50000; target 105000 "
     << (rate >= 105000 ? "met" : "NOT met") << ")";
  report(rate >= 50000, "throughput", os.str());
}

}  // namespace

int main() {
  try {
    const Vocabulary& v = testing::fixture();
    golden_sentence_1(v);
    golden_sentence_2(v);
    case_study(v);
    published_counts_arithmetic();
    round_trip(v);
    phonology_suite(v);
    allomorph_sharing(v);
    bpe_oracle();
    segmentation_oracle();
    throughput(v);
  } catch (const std::exception& e) {
    std::cout << "FAIL setup -- " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failure(s)" << std::endl;
  return failures ? 1 : 0;
}
