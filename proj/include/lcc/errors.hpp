#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed indices or shapes inside an instance.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A numerically singular matrix where a positive definite one was required.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A transcript or report failed one of its recomputed checks.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// A verified object contradicts a theorem the pipeline relies on, e.g. a
/// valid 2-query LDC shorter than the exponential length bound.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Text input that does not follow the expected format.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lcc
