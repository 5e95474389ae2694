#pragma once

#include "starinv/graph_forward.hpp"
#include "starinv/moment_solver.hpp"
#include "starinv/weyl.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace starinv {

/// S_1(pi, lambda) and S_1'(pi, lambda) assembled from Cauchy data through
/// the transformation-operator integrals.
class EndpointFunctions {
 public:
  /// Throws OmegaMismatch when int K differs from omega by more than
  /// 1e-6 (1 + |omega|); smaller gaps are removed by a constant shift of K.
  explicit EndpointFunctions(const CauchyData& cauchy);

  double s(double lambda) const;
  double s_prime(double lambda) const;
  BoundarySample sample(double lambda) const { return {s(lambda), s_prime(lambda)}; }
  const CauchyData& cauchy() const { return cauchy_; }

 private:
  CauchyData cauchy_;
  Eigen::VectorXd t_;
  Eigen::VectorXd weighted_n_;
  Eigen::VectorXd weighted_k_;
};

inline EndpointFunctions build_endpoint_functions(const CauchyData& cauchy) {
  return EndpointFunctions(cauchy);
}

/// Zeros mu_n (n >= 1) of S_1(pi, .) and nu_n (n >= 0) of S_1'(pi, .).
struct TwoSpectra {
  std::vector<double> mu;  // mu_1..
  std::vector<double> nu;  // nu_0..
};

TwoSpectra extract_two_spectra(const EndpointFunctions& ef, int n_count);

/// Two spectra of a potential given on a grid (forward map of the fit).
TwoSpectra two_spectra_of(const GridFunction& q, int n_count);

WeylValue weyl_m1(const EndpointFunctions& ef, double lambda);

struct PotentialFit {
  GridFunction q;
  Eigen::VectorXd coefficients;  // c_0, c_1..c_basis_dim
  double residual = 0.0;         // sum of squared eigenvalue misfits
  int iterations = 0;
};

inline constexpr int kDefaultBasisDim = 12;

/// Least-squares fit of q = c_0 + sum c_i cos(i x) to the two spectra by
/// Gauss-Newton with finite-difference Jacobians.
PotentialFit recover_potential(const TwoSpectra& ts, int basis_dim = kDefaultBasisDim,
                               int n_points = kDefaultGridPoints);

struct InverseOptions {
  int n_max = 0;  // 0: derived from the input lengths
  int basis_dim = kDefaultBasisDim;
};

struct ReconstructionDiagnostics {
  int m = 0;
  int n_max = 0;
  int basis_dim = 0;
  double omega_hat = 0.0;
  double omega1 = 0.0;
  int infinite_g = 0;
  double moment_residual = 0.0;
  double max_row_residual = 0.0;
  double gram_min = 0.0;
  double gram_max = 0.0;
  double l2_distance_to_reference = 0.0;
  double fit_residual = 0.0;
  int fit_iterations = 0;
  Eigen::VectorXd coefficients;
};

struct ReconstructionResult {
  GridFunction q1;
  CauchyData cauchy;
  TwoSpectra spectra;
  ReconstructionDiagnostics diagnostics;
};

/// omega_hat from the k = 1 family by tail-weighted least squares.
double estimate_omega_hat(std::span<const double> family1);

/// Recovers q_1 from q_2..q_m and the families lambda_n1, lambda_n2.
/// Failures are rethrown as PipelineError carrying the step index.
ReconstructionResult full_inverse(const std::vector<GridFunction>& known,
                                  std::span<const double> lambda1,
                                  std::span<const double> lambda2,
                                  const InverseOptions& options = {});

}  // namespace starinv
