#pragma once

#include <stdexcept>
#include <string>

namespace galcount {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (wrong place, mismatched modulus, shape mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (truncation, enumeration bound, prime cutoff) would be exceeded.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

/// Malformed or semantically invalid run configuration; carries the offending line when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace galcount
