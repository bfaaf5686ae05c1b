#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embeval {

/// Malformed input file or stream. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Bad caller-supplied parameter (threshold out of range, too few models, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lookup of a token that is not in the model vocabulary.
class UnknownTokenError : public std::out_of_range {
 public:
  explicit UnknownTokenError(const std::string& token)
      : std::out_of_range("unknown token: " + token), token_(token) {}

  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Neighbor cache written for a different model file.
class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace embeval
