#pragma once

#include <stdexcept>
#include <string>

namespace periwave {

/// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config file could not be parsed at all.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Config parsed but a field violates its contract; message names the field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Coefficient a(t) fails strict positivity on the verification grid.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Truncation ladder exceeded the configured hard cap.
class SizingError : public Error {
 public:
  using Error::Error;
};

/// An iteration (Newton, Picard, Neumann series) failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A linear operator turned out numerically singular; usually a resonance.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// A Diophantine screen rejected the parameter point.
class MelnikovExcluded : public Error {
 public:
  MelnikovExcluded(const std::string& msg, int j, int l)
      : Error(msg), j(j), l(l) {}
  int j = 0;
  int l = 0;
};

}  // namespace periwave
