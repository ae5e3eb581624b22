#pragma once

#include <stdexcept>

namespace pairbet {

// Caller misuse: invalid arguments, malformed configuration, incompatible
// method/data pairings.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Degenerate numerics: estimator components on the boundary, zero
// denominators, non-finite values where finite ones are required.
class numeric_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data; the message names the offending line.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairbet
