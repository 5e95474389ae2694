#pragma once

// Moment problem (f, v_nk)_H = f_nk in H = L2(0, pi) + L2(0, pi) for the
// Cauchy data f = (N, K) of the unknown edge.

#include "starinv/graph_forward.hpp"
#include "starinv/grid_function.hpp"
#include "starinv/weyl.hpp"

#include <Eigen/Dense>

#include <vector>

namespace starinv {

enum class RowForm {
  Standard,
  /// [rho sin(rho t); g cos(rho t)] (or its g = inf limit), scaled to the
  /// reference norm sqrt(pi/2). Used where g_n2 is 0 or infinite.
  Unnormalized,
  /// v_02 = [0; 1].
  Constant,
};

struct MomentVector {
  Eigen::VectorXd top;
  Eigen::VectorXd bottom;
  int n = 0;
  int k = 0;
  RowForm form = RowForm::Standard;
};

struct MomentTarget {
  double value = 0.0;
  int n = 0;
  int k = 0;
};

struct CauchyData {
  GridFunction n_func;
  GridFunction k_func;
  double omega = 0.0;
};

struct MomentSystem {
  std::vector<MomentVector> vectors;
  std::vector<MomentTarget> targets;
  int n_max = 0;
  int n_points = kDefaultGridPoints;
  double omega = 0.0;

  /// Rows scaled by sqrt of the trapezoid weights: (g, h)_H = row_g . row_h.
  Eigen::MatrixXd weighted_rows() const;
  Eigen::VectorXd target_vector() const;
};

/// Rows (n = 0..n_max, k = 1) from lambda_{n+1,1} and (n = 0..n_max, k = 2)
/// from v_02 and lambda_{n,2}.
MomentSystem build_moment_system(const SpectrumTable& lambdas, const GTable& g, double omega,
                                 int n_max, int n_points = kDefaultGridPoints);

/// v0_n1 = [sin((n + 1/2) t); 0], v0_n2 = [0; cos(n t)].
MomentVector reference_basis(int n, int k, int n_points = kDefaultGridPoints);

struct GramReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double l2_distance_to_reference = 0.0;
  /// ||v_nk - v0_nk||_H^2 per row, in row order.
  std::vector<double> row_distances_sq;
};

/// Extremes of the Gram spectrum; throws NotABasis when
/// min_eig < 1e-6 * max_eig.
GramReport gram_condition_report(const MomentSystem& system);

struct MomentSolution {
  CauchyData cauchy;
  double residual = 0.0;  // ||A f - targets||
  GramReport gram;
};

/// Minimum-norm f with (f, v_nk)_H = f_nk, i.e. the orthogonal projection of
/// the Cauchy data onto the span of the truncated vectors.
MomentSolution solve_moments(const MomentSystem& system);

/// (f, v)_H on the trapezoid rule.
double inner_product(const CauchyData& f, const MomentVector& v);

}  // namespace starinv
