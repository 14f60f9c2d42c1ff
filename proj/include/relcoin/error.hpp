#pragma once

#include <stdexcept>
#include <string>

namespace relcoin {

// Base for every error raised by the library. Protocol-level failures
// (aborted tosses, causality violations found by an audit) are values,
// not exceptions; these are reserved for misuse and bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: scenario geometry, trial counts, file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An agent tried to act from outside its laboratory region.
class PositionViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace relcoin
