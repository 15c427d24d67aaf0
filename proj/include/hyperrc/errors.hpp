#pragma once

#include <stdexcept>
#include <string>

namespace hyperrc {

// Error taxonomy mirrored by the C API status codes and CLI exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files or ill-formed JSON payloads.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// Violated preconditions: S not a subset of h, degenerate cuts, invalid seeds,
// constant sweep vectors, zero-variance embeddings.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Operations that exceed the exhaustive-enumeration caps (dual norms for
// oracle specs beyond rank 20, the general cut-improvement path beyond n = 20).
class UnsupportedError : public Error {
public:
  explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

}  // namespace hyperrc
