#pragma once

#include "starinv/errors.hpp"
#include "starinv/graph_forward.hpp"
#include "starinv/reconstructor.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace starinv::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kInvalidInput = 2,
  kNumberingAmbiguity = 3,
  kNoConvergence = 4,
  kNotABasis = 5,
  kAssumptionThree = 6,
  kIllConditioned = 7,
  kOmegaMismatch = 8,
  kInterlacing = 9,
  kStepFailure = 10,
  kTooManyExceptional = 11,
  kUsage = 64,
};

int exit_code(ErrorKind kind);

struct ForwardResult {
  SpectrumTable table;
  AssumptionReport report;
};

ForwardResult run_forward(const StarGraphProblem& problem, int n_max);

/// k = 1 and k = 2 families of a spectrum file; throws InvalidInput when a
/// family is missing or has gaps in n.
std::pair<std::vector<double>, std::vector<double>> inverse_families(const SpectrumTable& table);

struct StabilityRow {
  double epsilon = 0.0;
  int trial = 0;
  double weighted_l2_perturbation = 0.0;
  bool converged = false;
  double q1_error_l2 = 0.0;   // against the true q_1
  double deviation_l2 = 0.0;  // against the unperturbed reconstruction
  double ratio = 0.0;         // deviation_l2 / epsilon, 0 for epsilon = 0
  std::string failure;
};

struct StabilitySummary {
  double epsilon = 0.0;
  int converged = 0;
  int trials = 0;
  double median_ratio = 0.0;  // NaN when nothing converged
};

struct StabilityReport {
  double baseline_error = 0.0;
  std::vector<StabilityRow> rows;  // ordered by (epsilon index, trial)
  std::vector<StabilitySummary> summary;
};

struct StabilityOptions {
  std::vector<double> epsilons;
  int trials = 5;
  std::uint64_t seed = 1;
  InverseOptions inverse;  // n_max must be set
  unsigned threads = 0;    // 0: hardware concurrency
};

/// Perturbs rho_nk = sqrt(lambda_nk) of the baseline spectrum with
/// sum (n delta_rho)^2 < eps^2 and reruns the reconstruction per trial.
StabilityReport run_stability(const StarGraphProblem& problem, const StabilityOptions& options);

/// Weighted-sphere perturbation of the inverse-problem input, applied in rho.
/// Returns the weighted norm actually used.
double perturb_families(std::vector<double>& lambda1, std::vector<double>& lambda2, int n_max,
                        double epsilon, std::uint64_t seed, int eps_index, int trial);

/// Runs the command line. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace starinv::cli
