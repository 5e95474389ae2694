#pragma once

// Solution S(x, lambda) of -y'' + q y = lambda y with S(0) = 0, S'(0) = 1,
// propagated exactly through a piecewise-constant approximation of q.

#include "starinv/grid_function.hpp"

#include <span>
#include <vector>

namespace starinv {

/// S(pi, lambda) and S'(pi, lambda).
struct BoundarySample {
  double s_end = 0.0;
  double s_prime_end = 0.0;
};

/// Propagator over the cells of one edge. Each cell carries the mean of its
/// two endpoint samples; the transfer matrix of a cell is exact for that
/// constant, so accuracy does not degrade as lambda grows.
class EdgePropagator {
 public:
  explicit EdgePropagator(const GridFunction& q);

  BoundarySample solve(double lambda) const;

  /// Pruefer angle of S at x = pi. Continuous and strictly increasing in
  /// lambda; equals n*pi at the n-th Dirichlet eigenvalue and (n + 1/2)*pi at
  /// the n-th eigenvalue with y(0) = y'(pi) = 0 (counted from n = 0).
  double phase(double lambda) const;

  /// Zeros of S(pi, .) (n >= 1).
  double dirichlet_eigenvalue(int n) const;
  /// Zeros of S'(pi, .) (n >= 0).
  double neumann_eigenvalue(int n) const;

  /// mu_1..mu_count. Guesses (same length) start the bracket search at
  /// guess +- width.
  std::vector<double> dirichlet_eigenvalues(int count, std::span<const double> guesses = {},
                                            double width = 1e-4) const;
  /// nu_0..nu_{count-1}.
  std::vector<double> neumann_eigenvalues(int count, std::span<const double> guesses = {},
                                          double width = 1e-4) const;

  double mean_potential() const { return mean_; }
  double min_potential() const { return min_; }

 private:
  double eigenvalue_for_phase(double target, double guess, double width) const;

  Eigen::VectorXd cells_;
  double h_;
  double mean_;
  double min_;
};

BoundarySample solve_edge(const GridFunction& q, double lambda);
std::vector<BoundarySample> solve_edge_batch(const GridFunction& q,
                                             std::span<const double> lambdas);

}  // namespace starinv
