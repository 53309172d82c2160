#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jsr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside the domain of the operation (negative exponent,
/// weights of the wrong regime, alpha + beta < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A constructed set or a word enumeration would exceed its configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// Malformed instance text. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace jsr
