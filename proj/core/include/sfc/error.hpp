#pragma once

#include <stdexcept>
#include <string>

namespace sfc {

/// Malformed or inconsistent user input (documents, flags, ids).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request the library cannot honor for the given instance, e.g. an
/// instance too large for exhaustive search.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sfc
