#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamkoop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (shapes, ranges, options).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A factorization failed to converge or produced an impossible value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input values are unusable (non-finite features, corrupted samples).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A simulation or rollout left the finite range at a given step.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line` is 1-based.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace streamkoop
