#pragma once

#include <stdexcept>
#include <string>

namespace paramorph {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad command line / bad request shape.  CLI exit code 1.
struct UsageError : Error {
  using Error::Error;
};

// Malformed or inconsistent input data (parse errors, line-count
// mismatches, out-of-range alignment indices, ...).  CLI exit code 2.
struct DataError : Error {
  using Error::Error;
};

// A documented precondition of an operation was violated.  CLI exit code 2.
struct ContractError : Error {
  using Error::Error;
};

// Unreadable / unwritable files.  CLI exit code 2.
struct IoError : DataError {
  using DataError::DataError;
};

// Should-not-happen states.  CLI exit code 3.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace paramorph
