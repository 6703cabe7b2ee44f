#pragma once

#include <stdexcept>
#include <string>

namespace cbound {

// Caller passed something outside an operation's domain (wrong dimension,
// non-Hermitian observable, Bloch vector outside the ball, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidInput {
 public:
  DimensionMismatch(const std::string& what, long lhs, long rhs)
      : InvalidInput(what + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                     std::to_string(rhs) + ")") {}
};

// An analytically real/non-negative quantity came out with a residue larger
// than round-off can explain.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbound
