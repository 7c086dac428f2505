#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morphtok/cli.hpp"
#include "support/fixture.hpp"

namespace morphtok {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "morphtok");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / ("morphtok_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, EncodePrintsSurfacesPerLine) {
  const Result r = run_cli({"encode"}, "Kitap okumayı seviyorum.\nev\n");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  // The line break is part of the encoded text, so decoding restores it.
  EXPECT_EQ(r.out, "<uppercase> kitap <space> okuma yı <space> sev i yor um . <newline>\nev <newline>\n");
  EXPECT_EQ(run_cli({"encode"}, "ev").out, "ev\n");
}

TEST(Cli, SurfaceEscapesCoverWhitespaceChars) {
  EXPECT_EQ(cli::escape_surface("a b\\"), "a\\sb\\\\");
  EXPECT_EQ(cli::unescape_surface(cli::escape_surface("\t\r\n x")), "\t\r\n x");
}

TEST(Cli, EncodeDecodeRoundTripInEveryFormat) {
  const std::string text = slurp(testing::corpus_path());
  for (const char* fmt : {"--ids", "--surfaces", "--jsonl"}) {
    const Result enc = run_cli({"encode", fmt}, text);
    ASSERT_EQ(enc.code, cli::kExitOk) << fmt << enc.err;
    const Result dec = run_cli({"decode", fmt}, enc.out);
    ASSERT_EQ(dec.code, cli::kExitOk) << fmt << dec.err;
    EXPECT_EQ(dec.out, text) << fmt;
  }
}

TEST(Cli, ParallelEncodeMatchesSequential) {
  const std::string text = slurp(testing::corpus_path());
  EXPECT_EQ(run_cli({"encode", "--ids", "--jobs", "3"}, text).out, run_cli({"encode", "--ids"}, text).out);
}

TEST(Cli, EmptyInput) {
  const Result enc = run_cli({"encode"}, "");
  EXPECT_EQ(enc.code, cli::kExitOk);
  EXPECT_EQ(enc.out, "");
  const Result dec = run_cli({"decode", "--ids"}, "");
  EXPECT_EQ(dec.code, cli::kExitOk);
  EXPECT_EQ(dec.out, "");
}

TEST(Cli, CorruptIdIsADataError) {
  const Result r = run_cli({"decode", "--ids"}, "5 6\n5 999999 7\n");
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("token 1"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"decode", "--ids"}, "5 abc\n").code, cli::kExitData);
  EXPECT_EQ(run_cli({"decode"}, "ev жж\n").code, cli::kExitData);
}

TEST(Cli, MissingFilesAreIoErrors) {
  EXPECT_EQ(run_cli({"encode", "--lexicon", "/nonexistent/lex.json"}, "ev").code, cli::kExitIo);
  EXPECT_EQ(run_cli({"encode", "/nonexistent/input.txt"}).code, cli::kExitIo);
  EXPECT_EQ(run_cli({"lexicon", "validate", "/nonexistent/lex.json"}).code, cli::kExitIo);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"encode", "--ids", "--jsonl"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"encode", "--jobs", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"train-bpe"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, TrainBpeIsByteIdenticalAcrossRuns) {
  const fs::path dir = temp_dir();
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  const Result ra = run_cli({"train-bpe", testing::corpus_path(), "--size", "300", "-o", a});
  const Result rb = run_cli({"train-bpe", "--corpus", testing::corpus_path(), "--size", "300", "-o", b});
  ASSERT_EQ(ra.code, cli::kExitOk) << ra.err;
  ASSERT_EQ(rb.code, cli::kExitOk) << rb.err;
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(ra.out.find("vocab_size"), std::string::npos);
  EXPECT_NO_THROW(load_bpe_file(a));
  // The bundled model is reproducible from the bundled corpus.
  const Result bundled = run_cli({"train-bpe", testing::corpus_path(), "--size", "1000"});
  EXPECT_EQ(bundled.out, slurp(testing::bpe_path()));
  EXPECT_EQ(run_cli({"train-bpe", "--size", "10"}, "").code, cli::kExitData);
  fs::remove_all(dir);
}

TEST(Cli, EvalDumpsAndSelf) {
  const fs::path dir = temp_dir();
  const std::string dump = (dir / "d.jsonl").string();
  std::ofstream(dump) << "{\"tokenizer\":\"other\",\"tokens\":[\"kalk\",\"xyz\"],\"elapsed_seconds\":1}\n";
  const Result r = run_cli({"eval", "--self", dump});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("morphtok"), std::string::npos);
  EXPECT_NE(r.out.find("other"), std::string::npos);
  EXPECT_NE(r.out.find("50.00"), std::string::npos);

  const Result j = run_cli({"eval", "--self", "--synthetic", "20000", "--seed", "3", "--json"});
  ASSERT_EQ(j.code, cli::kExitOk) << j.err;
  const auto rows = nlohmann::json::parse(j.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(rows.at(0).at("total").get<std::size_t>(), 1000u);

  EXPECT_EQ(run_cli({"eval"}).code, cli::kExitData);
  std::ofstream(dump) << "{broken\n";
  EXPECT_EQ(run_cli({"eval", dump}).code, cli::kExitData);
  fs::remove_all(dir);
}

TEST(Cli, LexiconValidate) {
  const Result r = run_cli({"lexicon", "validate", "--bpe", testing::bpe_path()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find(": ok"), std::string::npos);
  EXPECT_NE(r.out.find("total_ids"), std::string::npos);
  const fs::path dir = temp_dir();
  const std::string bad = (dir / "bad.json").string();
  std::ofstream(bad) << "{\"format_version\": 1, \"specials\": [\"space\"]}";
  EXPECT_EQ(run_cli({"lexicon", "validate", bad}).code, cli::kExitData);
  fs::remove_all(dir);
}

TEST(Cli, BinaryPipeRoundTrip) {
  const std::string corpus = testing::corpus_path();
  const std::string cmd = std::string("'") + MORPHTOK_CLI_PATH + "' encode --ids '" + corpus + "' | '" +
                          MORPHTOK_CLI_PATH + "' decode --ids";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  EXPECT_EQ(::pclose(pipe), 0);
  EXPECT_EQ(out, slurp(corpus));
}

}  // namespace
}  // namespace morphtok
