#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polelab {

/// Argument outside the domain of an operation (e.g. r <= 0 where the pole is singular).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A geodesic left the configured working radius.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Field expression could not be parsed. position() is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Non-finite value produced while evaluating a field or an integrand.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario configuration rejected; the message starts with the JSON path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polelab
