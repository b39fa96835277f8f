#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patminer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A value exceeds a fixed capacity (vertex id width, pattern size, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked on inputs that violate its contract.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Not enough configured memory to run.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace patminer
