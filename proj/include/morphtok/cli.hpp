#pragma once

// Command-line front end. Lives in a header so tests can drive it in-process
// with string streams; tools/main.cpp only forwards argv and std streams.
//
//   morphtok encode [FILE] [--ids|--surfaces|--jsonl] [--jobs N] [-o OUT]
//   morphtok decode [FILE] [--ids|--surfaces|--jsonl] [-o OUT]
//   morphtok train-bpe --corpus FILE --size N [-o OUT]
//   morphtok eval [DUMP...] [--self [--corpus FILE | --synthetic CHARS]] [--json]
//   morphtok lexicon validate [FILE]
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 I/O error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "morphtok/bpe.hpp"
#include "morphtok/decoder.hpp"
#include "morphtok/encoder.hpp"
#include "morphtok/error.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/metrics.hpp"
#include "morphtok/synthetic.hpp"
#include "morphtok/vocabulary.hpp"

#ifndef MORPHTOK_DATA_DIR
#define MORPHTOK_DATA_DIR "data"
#endif

namespace morphtok::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

inline std::string default_lexicon_path() {
  return std::string(MORPHTOK_DATA_DIR) + "/lexicon/tr_fixture.json";
}
inline std::string default_bpe_path() {
  return std::string(MORPHTOK_DATA_DIR) + "/bpe/tr_fixture_bpe.json";
}
inline std::string default_corpus_path() {
  return std::string(MORPHTOK_DATA_DIR) + "/corpus/mini_tr.txt";
}

enum class Format { Surfaces, Ids, Jsonl };

// Surfaces are space-separated on one line, so whitespace and backslashes
// inside a surface are escaped.
inline std::string escape_surface(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape_surface(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw data_error("dangling escape in surface '" + std::string(s) + "'");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 's': out += ' '; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: throw data_error("bad escape '\\" + std::string(1, s[i]) + "' in surface");
    }
  }
  return out;
}

inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > b) out.emplace_back(line.substr(b, i - b));
  }
  return out;
}

inline std::string format_encoded(const EncodedText& e, const Vocabulary& vocab, Format f) {
  std::string out;
  switch (f) {
    case Format::Ids:
      for (std::size_t i = 0; i < e.ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(e.ids[i]);
      }
      break;
    case Format::Surfaces: {
      const auto surfaces = token_surfaces(e.ids, vocab);
      for (std::size_t i = 0; i < surfaces.size(); ++i) {
        if (i) out += ' ';
        out += escape_surface(surfaces[i]);
      }
      break;
    }
    case Format::Jsonl: {
      nlohmann::ordered_json j;
      j["ids"] = e.ids;
      j["surfaces"] = token_surfaces(e.ids, vocab);
      out = j.dump();
      break;
    }
  }
  return out;
}

inline std::vector<TokenId> parse_ids(std::string_view line) {
  std::vector<TokenId> ids;
  for (const auto& field : split_fields(line)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || field.front() == '-' || v > UINT32_MAX)
      throw data_error("token " + std::to_string(ids.size()) + ": '" + field +
                       "' is not a token id");
    ids.push_back(static_cast<TokenId>(v));
  }
  return ids;
}

inline std::string decode_line(std::string_view line, const Vocabulary& vocab, Format f) {
  switch (f) {
    case Format::Ids: return decode(parse_ids(line), vocab);
    case Format::Jsonl: {
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) return {};
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw data_error(std::string("malformed JSON: ") + e.what());
      }
      if (!j.is_object() || !j.contains("ids") || !j.at("ids").is_array())
        throw data_error("expected a record with an \"ids\" array");
      std::vector<TokenId> ids;
      for (const auto& v : j.at("ids")) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > UINT32_MAX)
          throw data_error("token " + std::to_string(ids.size()) + ": not a token id");
        ids.push_back(v.get<TokenId>());
      }
      return decode(ids, vocab);
    }
    case Format::Surfaces: {
      std::vector<std::string> surfaces;
      for (const auto& field : split_fields(line)) surfaces.push_back(unescape_surface(field));
      return decode_surfaces(surfaces, vocab);
    }
  }
  return {};
}

// getline that also reports whether the line was newline-terminated.
inline bool read_line(std::istream& in, std::string& line, bool& newline) {
  if (!std::getline(in, line)) return false;
  newline = !in.eof();
  return true;
}

struct Options {
  std::string lexicon = default_lexicon_path();
  std::string bpe = default_bpe_path();
  std::string input;   // empty or "-": the input stream
  std::string output;  // empty or "-": the output stream
  Format format = Format::Surfaces;
  unsigned jobs = 1;
  // train-bpe
  std::string corpus;
  std::size_t size = 0;
  // eval
  std::vector<std::string> dumps;
  bool self = false;
  std::size_t synthetic = 0;
  std::uint64_t seed = 1;
  bool json = false;
};

namespace detail {

struct Io {
  std::istream* in;
  std::ostream* out;
  std::unique_ptr<std::ifstream> file_in;
  std::unique_ptr<std::ofstream> file_out;

  Io(const Options& o, std::istream& in_default, std::ostream& out_default)
      : in(&in_default), out(&out_default) {
    if (!o.input.empty() && o.input != "-") {
      file_in = std::make_unique<std::ifstream>(o.input, std::ios::binary);
      if (!*file_in) throw io_error("cannot open input '" + o.input + "'");
      in = file_in.get();
    }
    if (!o.output.empty() && o.output != "-") {
      file_out = std::make_unique<std::ofstream>(o.output, std::ios::binary);
      if (!*file_out) throw io_error("cannot open output '" + o.output + "'");
      out = file_out.get();
    }
  }

  void finish(const std::string& what) {
    out->flush();
    if (!*out) throw io_error("failed writing " + what);
  }
};

inline Vocabulary load(const Options& o) {
  return Vocabulary(load_lexicon_file(o.lexicon),
                    o.bpe.empty() ? BpeModel{} : load_bpe_file(o.bpe));
}

inline std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline int cmd_encode(const Options& o, std::istream& in, std::ostream& out) {
  const Vocabulary vocab = detail::load(o);
  detail::Io io(o, in, out);
  constexpr std::size_t kBatch = 2048;
  std::vector<std::string> batch;
  std::string line;
  bool newline = false;
  auto flush = [&] {
    const auto encoded = encode_all(batch, vocab, o.jobs);
    for (const auto& e : encoded) *io.out << format_encoded(e, vocab, o.format) << '\n';
    batch.clear();
  };
  while (read_line(*io.in, line, newline)) {
    if (newline) line += '\n';
    batch.push_back(std::move(line));
    if (batch.size() == kBatch) flush();
  }
  if (io.in->bad()) throw io_error("failed reading input");
  flush();
  io.finish("encoded output");
  return kExitOk;
}

inline int cmd_decode(const Options& o, std::istream& in, std::ostream& out) {
  const Vocabulary vocab = detail::load(o);
  detail::Io io(o, in, out);
  std::string line;
  bool newline = false;
  for (std::size_t lineno = 1; read_line(*io.in, line, newline); ++lineno) {
    try {
      *io.out << decode_line(line, vocab, o.format);
    } catch (const data_error& e) {
      throw data_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (io.in->bad()) throw io_error("failed reading input");
  io.finish("decoded output");
  return kExitOk;
}

// Word payloads (lowercased, NFC) with counts, in first-seen order.
inline WordCounts count_words(std::istream& in) {
  std::map<std::string, std::uint64_t> counts;
  std::string line;
  while (std::getline(in, line))
    for (const auto& seg : preprocess(line))
      if (seg.kind == PreSegment::Kind::Word) ++counts[seg.payload];
  return WordCounts(counts.begin(), counts.end());
}

inline int cmd_train_bpe(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Options io_opts = o;
  io_opts.input = o.corpus;
  detail::Io io(io_opts, in, out);
  const WordCounts words = count_words(*io.in);
  if (io.in->bad()) throw io_error("failed reading corpus");
  const BpeModel model = train_bpe(words, o.size);
  *io.out << save_bpe(model);
  io.finish("BPE model");
  std::ostream& report = io.file_out ? out : err;
  report << "vocab_size " << model.size() << "\nmerges " << model.merges().size() << "\n";
  return kExitOk;
}

// Encodes `text` line by line and returns the surface dump with timing.
inline TokenDump self_dump(const std::string& text, const Vocabulary& vocab, unsigned jobs) {
  std::vector<std::string> lines;
  for (std::size_t b = 0; b < text.size();) {
    std::size_t e = text.find('\n', b);
    e = e == std::string::npos ? text.size() : e + 1;
    lines.emplace_back(text.substr(b, e - b));
    b = e;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto encoded = encode_all(lines, vocab, jobs);
  const auto t1 = std::chrono::steady_clock::now();
  TokenDump dump;
  dump.tokenizer = "morphtok";
  dump.vocab_size = vocab.size();
  dump.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
  for (const auto& e : encoded)
    for (auto& s : token_surfaces(e.ids, vocab)) dump.tokens.push_back(std::move(s));
  return dump;
}

inline int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  std::vector<TokenDump> dumps;
  if (o.self) {
    const Vocabulary vocab = detail::load(o);
    std::string text;
    if (o.synthetic > 0) {
      text = SentenceGenerator(vocab, o.seed).corpus(o.synthetic);
    } else {
      const std::string path = o.corpus.empty() ? default_corpus_path() : o.corpus;
      std::ifstream f(path, std::ios::binary);
      if (!f) throw io_error("cannot open corpus '" + path + "'");
      text = detail::read_all(f);
    }
    dumps.push_back(self_dump(text, vocab, o.jobs));
  }
  for (const auto& path : o.dumps) {
    auto more = path == "-" ? read_dumps(in, "<stdin>") : read_dumps_file(path);
    for (auto& d : more) dumps.push_back(std::move(d));
  }
  if (dumps.empty()) throw data_error("eval: nothing to evaluate (give dump files or --self)");
  const Lexicon lex = load_lexicon_file(o.lexicon);
  const auto rows = compare(dumps, lex);
  Options io_opts = o;
  io_opts.input.clear();
  detail::Io io(io_opts, in, out);
  *io.out << (o.json ? format_json(rows) : format_table(rows));
  io.finish("metrics");
  return kExitOk;
}

inline int cmd_lexicon_validate(const Options& o, std::ostream& out) {
  const Lexicon lex = load_lexicon_file(o.lexicon);
  std::size_t allomorphs = 0, variants = 0;
  for (const auto& g : lex.affixes()) allomorphs += g.allomorphs.size();
  for (const auto& r : lex.roots()) variants += r.variants.size();
  out << o.lexicon << ": ok\n"
      << "specials " << lex.specials().size() << "\n"
      << "roots " << lex.roots().size() << " (" << variants << " surfaces)\n"
      << "affix_groups " << lex.affixes().size() << " (" << allomorphs << " allomorphs)\n"
      << "chars " << lex.chars().size() << "\n";
  if (!o.bpe.empty()) {
    const Vocabulary vocab(lex, load_bpe_file(o.bpe));
    out << "bpe_subwords " << vocab.bpe().size() << "\n"
        << "total_ids " << vocab.size() << " / " << kVocabularyBudget << "\n";
  } else {
    out << "total_ids " << lex.size() << " / " << kVocabularyBudget << "\n";
  }
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Hybrid morphological tokenizer for Turkish"};
  app.require_subcommand(1);
  Options o;
  bool ids = false, surfaces = false, jsonl = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--lexicon", o.lexicon, "Lexicon JSON")->capture_default_str();
    sub->add_option("--bpe", o.bpe, "BPE model JSON (empty: none)")->capture_default_str();
  };
  auto formats = [&](CLI::App* sub) {
    auto* g = sub->add_option_group("format");
    g->add_flag("--ids", ids, "Numeric token IDs");
    g->add_flag("--surfaces", surfaces, "Token surfaces (default)");
    g->add_flag("--jsonl", jsonl, "One JSON record per line");
    g->require_option(0, 1);
  };

  auto* enc = app.add_subcommand("encode", "Encode text, one output line per input line");
  common(enc);
  formats(enc);
  enc->add_option("input", o.input, "Input file (default: stdin)");
  enc->add_option("-o,--output", o.output, "Output file (default: stdout)");
  enc->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  auto* dec = app.add_subcommand("decode", "Decode encoder output back to text");
  common(dec);
  formats(dec);
  dec->add_option("input", o.input, "Input file (default: stdin)");
  dec->add_option("-o,--output", o.output, "Output file (default: stdout)");

  auto* train = app.add_subcommand("train-bpe", "Train a BPE model on a text corpus");
  train->add_option("corpus,--corpus", o.corpus, "Corpus text file (default: stdin)");
  train->add_option("--size", o.size, "Target vocabulary size")->required();
  train->add_option("-o,--output", o.output, "Model file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Compute TR%/Pure% metrics for token dumps");
  common(eval);
  eval->add_option("dumps", o.dumps, "Token dump files (JSON lines)");
  eval->add_flag("--self", o.self, "Tokenize a corpus in-process and time it");
  eval->add_option("--corpus", o.corpus, "Corpus for --self (default: bundled mini corpus)");
  eval->add_option("--synthetic", o.synthetic, "Generate a synthetic corpus of N chars for --self");
  eval->add_option("--seed", o.seed, "Seed for --synthetic")->capture_default_str();
  eval->add_option("--jobs", o.jobs, "Worker threads for --self")->check(CLI::Range(1u, 256u));
  eval->add_flag("--json", o.json, "Emit JSON instead of a table");
  eval->add_option("-o,--output", o.output, "Output file (default: stdout)");

  auto* lexcmd = app.add_subcommand("lexicon", "Lexicon utilities");
  lexcmd->require_subcommand(1);
  auto* validate = lexcmd->add_subcommand("validate", "Load and check a lexicon");
  validate->add_option("lexicon,--lexicon", o.lexicon, "Lexicon JSON")->capture_default_str();
  std::string validate_bpe;
  validate->add_option("--bpe", validate_bpe, "Also check the budget with this BPE model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.format = ids ? Format::Ids : jsonl ? Format::Jsonl : Format::Surfaces;

  try {
    if (*enc) return cmd_encode(o, in, out);
    if (*dec) return cmd_decode(o, in, out);
    if (*train) return cmd_train_bpe(o, in, out, err);
    if (*eval) return cmd_eval(o, in, out);
    if (*validate) {
      o.bpe = validate_bpe;
      return cmd_lexicon_validate(o, out);
    }
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const data_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace morphtok::cli
