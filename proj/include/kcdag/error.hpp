#pragma once

#include <stdexcept>
#include <string>

namespace kcdag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DIMACS or kdag input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A decision vertex whose variable does not precede its descendants.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kcdag
