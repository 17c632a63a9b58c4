#pragma once

#include <stdexcept>
#include <string>

namespace sepph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad sizes, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A supervised quantity was requested on unlabeled data.
class MissingLabels : public Error {
 public:
  using Error::Error;
};

/// Snapshots of one run disagree on point count or dimension.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace sepph
