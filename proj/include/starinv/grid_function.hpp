#pragma once

#include <Eigen/Dense>

#include <functional>

namespace starinv {

/// Number of samples used when a grid size is not given explicitly.
inline constexpr int kDefaultGridPoints = 2049;

/// A real function on [0, pi] sampled at x_i = i*pi/(n-1).
///
/// Used for potentials as well as for the kernel traces N(t), K(t).
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Eigen::VectorXd values);

  static GridFunction constant(double c, int n_points = kDefaultGridPoints);
  static GridFunction sample(const std::function<double(double)>& f,
                             int n_points = kDefaultGridPoints);

  int n_points() const { return static_cast<int>(values_.size()); }
  double step() const;
  double x(int i) const { return i * step(); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }

  /// Mean of the two endpoint samples of every cell (length n_points - 1).
  Eigen::VectorXd cell_averages() const;

  /// Composite trapezoid integral over [0, pi].
  double integrate() const;
  double l2_norm() const;

  bool same_grid(const GridFunction& other) const { return n_points() == other.n_points(); }

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;
  GridFunction operator+(double c) const;

 private:
  Eigen::VectorXd values_;
};

/// Trapezoid weights on the uniform n-point grid over [0, pi].
Eigen::VectorXd trapezoid_weights(int n_points);

/// Uniform grid nodes on [0, pi].
Eigen::VectorXd grid_nodes(int n_points);

/// omega = 1/2 * integral of q over [0, pi].
double integrate_potential(const GridFunction& q);

}  // namespace starinv
