#pragma once

#include <stdexcept>
#include <string>

namespace cellinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual or binary input (DIMACS, configuration files, tables).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on indices, lengths or dimensions was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or materialization would exceed its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace cellinv
