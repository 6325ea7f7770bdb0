#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgedel {

// Base of every error raised by the library. CLI exit codes key off the
// concrete type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed text describing an invalid model (unknown variable, bad table length, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Input uses a construct outside the supported subset of a foreign format.
class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// A width or enumeration cap was exceeded.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double required) : Error(what), required_(required) {}
  double required() const noexcept { return required_; }

 private:
  double required_;
};

// Pr(e) = 0 where a query needs it positive.
class InconsistentEvidence : public Error {
 public:
  using Error::Error;
};

// Overflow, NaN, or other arithmetic breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A fixed-point update produced an all-zero vector.
class DegenerateUpdate : public Error {
 public:
  using Error::Error;
};

// Caller passed arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace edgedel
