#pragma once

#include <stdexcept>
#include <string>

namespace netresp {

// Bad argument to a library call (out-of-range index, non-finite input, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates a structural invariant (asymmetric matrix, bad file row).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset or report file could not be parsed. Carries the 1-based line number
// when one applies (0 otherwise).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

  // Same error, message prefixed with the file it came from.
  static ParseError in_file(const std::string& file, const ParseError& e) {
    return ParseError(file + ": " + e.what(), e.line(), Prefixed{});
  }

 private:
  struct Prefixed {};
  ParseError(const std::string& message, std::size_t line, Prefixed) : ValidationError(message), line_(line) {}
  std::size_t line_;
};

// Factorization failures and other floating point breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quantity not defined for the given input (AUC with one class, assortativity
// of an edgeless graph).
class UndefinedValue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Objects that do not belong together (draws vs. dataset, empty draw sets).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace netresp
