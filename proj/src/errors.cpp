#include "starinv/errors.hpp"

namespace starinv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::NumberingAmbiguity: return "NumberingAmbiguity";
    case ErrorKind::AssumptionThreeViolation: return "AssumptionThreeViolation";
    case ErrorKind::MissingEigenvalue: return "MissingEigenvalue";
    case ErrorKind::NotABasis: return "NotABasis";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::OmegaMismatch: return "OmegaMismatch";
    case ErrorKind::InterlacingViolation: return "InterlacingViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TooManyExceptional: return "TooManyExceptional";
  }
  return "Unknown";
}

AssumptionThreeViolation::AssumptionThreeViolation(int edge, int n, int k)
    : SpectralError(ErrorKind::AssumptionThreeViolation,
                    "assumption (iii) violated: S_" + std::to_string(edge) +
                        "(pi, lambda_" + std::to_string(n) + "," + std::to_string(k) +
                        ") = 0 together with another edge; the eigenvalue carries no "
                        "information about q1"),
      edge_(edge), n_(n), k_(k) {}

namespace {
const char* step_name(int step) {
  switch (step) {
    case 1: return "omega estimation";
    case 2: return "Weyl functions of known edges";
    case 3: return "interpolation data g";
    case 4: return "moment system solve";
    case 5: return "endpoint functions and two spectra";
    case 6: return "two-spectra potential fit";
  }
  return "?";
}
}  // namespace

PipelineError::PipelineError(int step, const SpectralError& cause)
    : SpectralError(cause.kind(), "step " + std::to_string(step) + " (" + step_name(step) +
                                      "): " + cause.what()),
      step_(step) {}

}  // namespace starinv
