#pragma once

#include <stdexcept>
#include <string>

namespace vflow {

// Invalid argument or state outside an operation's domain (non-finite input,
// r0 < 1, psi1 == 0, malformed grid, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vorticity model failed its hypothesis checks and the caller did not
// explicitly allow unvalidated models.
class UnvalidatedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The first iterate already leaves (0, delta] at the second grid node.
class WindowCollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive step size fell below h_min.
class StepSizeUnderflowError : public std::runtime_error {
 public:
  StepSizeUnderflowError(const std::string& what, double r) : std::runtime_error(what), r_(r) {}
  double location() const noexcept { return r_; }

 private:
  double r_;
};

// A proof-chain check was asked to run on inputs that violate its premise.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vflow
