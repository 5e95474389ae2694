#pragma once

// Star graph of m edges of length pi with Dirichlet conditions at the
// pendant vertices and continuity + Kirchhoff conditions at the centre.

#include "starinv/grid_function.hpp"

#include <span>
#include <string>
#include <vector>

namespace starinv {

class StarGraphProblem {
 public:
  explicit StarGraphProblem(std::vector<GridFunction> potentials);

  int m() const { return static_cast<int>(potentials_.size()); }
  const GridFunction& potential(int j) const { return potentials_.at(j - 1); }  // 1-based
  const std::vector<GridFunction>& potentials() const { return potentials_; }
  int n_points() const { return potentials_.front().n_points(); }

  /// omega_j = 1/2 int q_j, in edge order.
  std::vector<double> omegas() const;
  double omega_hat() const;

 private:
  std::vector<GridFunction> potentials_;
};

struct SpectrumEntry {
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  int multiplicity = 1;
};

/// Eigenvalues labelled (n, k) following the asymptotic numbering
/// rho_n1 ~ n - 1/2 + omega_hat/(pi n), rho_nk ~ n + z_{k-1}/(pi n).
struct SpectrumTable {
  std::vector<SpectrumEntry> entries;  // sorted by (k, n)
  double omega_hat = 0.0;
  std::vector<double> z_roots;

  const SpectrumEntry* find(int n, int k) const;
  /// Throws MissingEigenvalue when (n, k) is absent.
  double lambda(int n, int k) const;
  /// Eigenvalues of family k ordered by n (n = 1, 2, ...).
  std::vector<double> family(int k) const;
  int max_n(int k) const;
  /// kappa_nk = n * (rho_nk - main asymptotic term), n = 1..max_n(k).
  std::vector<double> residuals(int k) const;
  void sort();
};

/// Builds a table from the two families used by the inverse problem;
/// family1[i] is lambda_{i+1,1}.
SpectrumTable make_partial_table(std::span<const double> family1, std::span<const double> family2);

/// Delta(lambda); zero exactly at the eigenvalues.
double characteristic_delta(const StarGraphProblem& problem, double lambda);

/// All eigenvalues with n <= n_max and k = 1..m.
SpectrumTable compute_spectrum(const StarGraphProblem& problem, int n_max);

/// Roots of d/dz prod (z - omega_k), ascending, with multiplicity.
std::vector<double> char_poly_roots(std::span<const double> omegas);

/// |S| at or below this is treated as zero.
double vanishing_threshold(double lambda);

struct EdgeLabel {
  int j = 0, n = 0, k = 0;
};

struct AssumptionReport {
  bool distinct_ok = true;
  std::vector<EdgeLabel> repeated;  // j unused
  bool positive_ok = true;
  std::vector<EdgeLabel> nonpositive;  // j unused
  bool s_nonzero_ok = true;
  std::vector<EdgeLabel> vanishing;
  bool z1_separated_ok = true;
  std::vector<int> z1_coincident_edges;
  bool s1_at_zero_ok = true;

  bool all_ok() const {
    return distinct_ok && positive_ok && s_nonzero_ok && z1_separated_ok && s1_at_zero_ok;
  }
  std::string summary() const;
};

AssumptionReport check_assumptions(const StarGraphProblem& problem, const SpectrumTable& table);

/// signed sqrt: sqrt(lambda) for lambda >= 0, -sqrt(-lambda) otherwise.
double signed_rho(double lambda);

}  // namespace starinv
