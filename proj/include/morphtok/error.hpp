#pragma once

#include <stdexcept>
#include <string>

namespace morphtok {

// Malformed or inconsistent input data (lexicon, model, dump, token ids).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace morphtok
