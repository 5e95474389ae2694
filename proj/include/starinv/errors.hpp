#pragma once

#include <stdexcept>
#include <string>

namespace starinv {

/// Failure categories; the CLI maps each one to a stable exit code.
enum class ErrorKind {
  InvalidInput,
  StepFailure,
  NumberingAmbiguity,
  AssumptionThreeViolation,
  MissingEigenvalue,
  NotABasis,
  IllConditioned,
  OmegaMismatch,
  InterlacingViolation,
  NoConvergence,
  TooManyExceptional,
};

const char* to_string(ErrorKind kind);

class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an eigenvalue coincides with a Dirichlet eigenvalue of two or
/// more known edges, so it carries no information about the unknown edge.
class AssumptionThreeViolation : public SpectralError {
 public:
  AssumptionThreeViolation(int edge, int n, int k);

  int edge() const noexcept { return edge_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

 private:
  int edge_, n_, k_;
};

/// An error from one step of the inverse pipeline, tagged with the step index
/// (1..6). kind() is the kind of the underlying failure.
class PipelineError : public SpectralError {
 public:
  PipelineError(int step, const SpectralError& cause);

  int step() const noexcept { return step_; }

 private:
  int step_;
};

}  // namespace starinv
