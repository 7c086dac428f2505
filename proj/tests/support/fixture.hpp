#pragma once

#include <string>

#include "morphtok/bpe.hpp"
#include "morphtok/lexicon.hpp"
#include "morphtok/vocabulary.hpp"

namespace morphtok::testing {

inline std::string data_path(const std::string& rel) { return std::string(MORPHTOK_DATA_DIR) + "/" + rel; }

inline const std::string& lexicon_path() {
  static const std::string p = data_path("lexicon/tr_fixture.json");
  return p;
}
inline const std::string& bpe_path() {
  static const std::string p = data_path("bpe/tr_fixture_bpe.json");
  return p;
}
inline const std::string& corpus_path() {
  static const std::string p = data_path("corpus/mini_tr.txt");
  return p;
}

// The bundled fixture lexicon + BPE model, loaded once.
inline const Vocabulary& fixture() {
  static const Vocabulary v = load_vocabulary(lexicon_path(), bpe_path());
  return v;
}

}  // namespace morphtok::testing
