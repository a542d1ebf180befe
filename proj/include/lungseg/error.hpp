#pragma once

#include <stdexcept>

namespace lungseg {

/// Base class for every error this library raises.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File missing, unreadable, or wrong size.
struct IoError : Error {
  using Error::Error;
};

/// File readable but malformed (bad magic, unsupported field, ...).
struct FormatError : Error {
  using Error::Error;
};

/// Parameter violates an operation's preconditions.
struct ParamError : Error {
  using Error::Error;
};

}  // namespace lungseg
