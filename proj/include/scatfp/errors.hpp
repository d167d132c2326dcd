#pragma once

#include <stdexcept>
#include <string>

namespace scatfp {

// Exit-code families used by the command-line tool:
//   ArgumentError, ParseError, ValidationError -> 1
//   IoError                                    -> 2
//   TrainingError                              -> 3

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : ValidationError {
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : ValidationError(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative solver stops without meeting its tolerance.
struct TrainingError : std::runtime_error {
  TrainingError(const std::string& what, double violation)
      : std::runtime_error(what), violation_(violation) {}
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

}  // namespace scatfp
