#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odenorm {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different variable contexts, or a variable is unknown.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// Not enough truncation weight to produce a meaningful result.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Mathematical precondition violated: non-invertible jet, vanishing
/// leading coefficient, wrong point class, non-homogeneous input...
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text. `offset` is the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace odenorm
