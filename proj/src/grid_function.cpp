#include "starinv/grid_function.hpp"

#include "starinv/errors.hpp"

#include <cmath>
#include <numbers>

namespace starinv {

GridFunction::GridFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 3)
    throw SpectralError(ErrorKind::InvalidInput, "grid function needs at least 3 points");
  if (!values_.allFinite())
    throw SpectralError(ErrorKind::InvalidInput, "grid function has non-finite samples");
}

GridFunction GridFunction::constant(double c, int n_points) {
  return GridFunction(Eigen::VectorXd::Constant(n_points, c));
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, int n_points) {
  const Eigen::VectorXd x = grid_nodes(n_points);
  return GridFunction(x.unaryExpr(f));
}

double GridFunction::step() const { return std::numbers::pi / (n_points() - 1); }

Eigen::VectorXd GridFunction::cell_averages() const {
  const Eigen::Index cells = values_.size() - 1;
  return 0.5 * (values_.head(cells) + values_.tail(cells));
}

double GridFunction::integrate() const {
  return trapezoid_weights(n_points()).dot(values_);
}

double GridFunction::l2_norm() const {
  return std::sqrt(trapezoid_weights(n_points()).dot(values_.cwiseAbs2()));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  if (!same_grid(other))
    throw SpectralError(ErrorKind::InvalidInput, "grid functions live on different grids");
  return GridFunction(values_ + other.values_);
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  if (!same_grid(other))
    throw SpectralError(ErrorKind::InvalidInput, "grid functions live on different grids");
  return GridFunction(values_ - other.values_);
}

GridFunction GridFunction::operator+(double c) const {
  return GridFunction((values_.array() + c).matrix());
}

Eigen::VectorXd trapezoid_weights(int n_points) {
  const double h = std::numbers::pi / (n_points - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_points, h);
  w[0] = w[n_points - 1] = 0.5 * h;
  return w;
}

Eigen::VectorXd grid_nodes(int n_points) {
  return Eigen::VectorXd::LinSpaced(n_points, 0.0, std::numbers::pi);
}

double integrate_potential(const GridFunction& q) { return 0.5 * q.integrate(); }

}  // namespace starinv
