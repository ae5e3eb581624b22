#pragma once
// Delimited-text column reader for the `test` subcommand: one observation per
// row, column selected by index or header name.

#include <string>
#include <vector>

#include "pairbet/errors.hpp"

namespace pairbet {

struct InputSpec {
  enum class Kind { binary, real };

  std::string path;
  std::string column = "0";  // zero-based index, or header name with skip_header
  Kind kind = Kind::real;
  char delimiter = ',';
  bool skip_header = false;
};

// Reads the selected column. Parse errors name the offending line; binary
// kind requires every value to be exactly 0 or 1; empty input is an error.
std::vector<double> read_column(const InputSpec& spec);

}  // namespace pairbet
