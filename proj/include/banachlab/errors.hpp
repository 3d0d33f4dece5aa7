#pragma once

#include <stdexcept>
#include <string>

namespace banachlab {

/// Malformed input or violated precondition (CLI exit status 1).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sequence or search that was required to settle did not.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace banachlab
