#pragma once

#include <stdexcept>
#include <string>

namespace besov {

/// Raised when an operation is called outside its documented domain of validity.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid or coefficient file could not be read or does not match its header.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace besov
