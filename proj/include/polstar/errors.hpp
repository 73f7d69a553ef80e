#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polstar {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside a function's domain (ln of a nonpositive enclosure,
/// division by an enclosure containing zero, tan across a pole, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed; carries the offending position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// A certified computation could not reach its tolerance after precision
/// escalation (an "unresolved norm" and friends).
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An iterative algorithm failed to converge within its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace polstar
