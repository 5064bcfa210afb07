#pragma once

#include <stdexcept>
#include <string>

namespace maxinf {

// Malformed input record. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Value outside the admissible range (probabilities, parameters, generator constraints).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Exact enumeration refused because the instance exceeds a hard limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation requested on an object that is not in a usable state (e.g. empty sketch).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace maxinf
