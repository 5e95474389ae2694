#include "starinv/sl_core.hpp"

#include "starinv/entire.hpp"
#include "starinv/errors.hpp"
#include "starinv/roots.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace starinv {

EdgePropagator::EdgePropagator(const GridFunction& q)
    : cells_(q.cell_averages()), h_(q.step()), mean_(cells_.mean()), min_(cells_.minCoeff()) {}

BoundarySample EdgePropagator::solve(double lambda) const {
  double y = 0.0, dy = 1.0;
  for (Eigen::Index i = 0; i < cells_.size(); ++i) {
    const double mu = lambda - cells_[i];
    const double c = cos_entire(mu, h_);
    const double s = sinc_entire(mu, h_);
    const double y_next = c * y + s * dy;
    dy = -mu * s * y + c * dy;
    y = y_next;
  }
  if (!std::isfinite(y) || !std::isfinite(dy))
    throw SpectralError(ErrorKind::StepFailure,
                        "edge propagation overflowed at lambda = " + std::to_string(lambda));
  return {y, dy};
}

double EdgePropagator::phase(double lambda) const {
  double y = 0.0, dy = 1.0;
  int sign = 1;
  int crossings = 0;
  for (Eigen::Index i = 0; i < cells_.size(); ++i) {
    const double mu = lambda - cells_[i];
    if (mu * h_ * h_ > 0.25 * std::numbers::pi * std::numbers::pi)
      throw SpectralError(ErrorKind::StepFailure,
                          "grid too coarse for lambda = " + std::to_string(lambda));
    const double c = cos_entire(mu, h_);
    const double s = sinc_entire(mu, h_);
    const double y_next = c * y + s * dy;
    dy = -mu * s * y + c * dy;
    y = y_next;
    if (y != 0.0 && (y > 0) != (sign > 0)) {
      sign = -sign;
      ++crossings;
    }
    const double scale = std::abs(y) + std::abs(dy);
    if (scale > 1e100) {
      y *= 1e-100;
      dy *= 1e-100;
    }
  }
  if (!std::isfinite(y) || !std::isfinite(dy))
    throw SpectralError(ErrorKind::StepFailure,
                        "edge propagation overflowed at lambda = " + std::to_string(lambda));
  // sign * y >= 0 by construction, so the remainder lies in [0, pi].
  const double rest = std::atan2(sign * y, sign * dy);
  return crossings * std::numbers::pi + rest;
}

double EdgePropagator::eigenvalue_for_phase(double target, double guess, double width) const {
  auto f = [&](double lambda) { return phase(lambda) - target; };
  return increasing_root(f, guess, width);
}

double EdgePropagator::dirichlet_eigenvalue(int n) const {
  const double guess = double(n) * n + mean_;
  return eigenvalue_for_phase(n * std::numbers::pi, guess, 0.5 + 0.5 * n);
}

double EdgePropagator::neumann_eigenvalue(int n) const {
  const double guess = (n + 0.5) * (n + 0.5) + mean_;
  return eigenvalue_for_phase((n + 0.5) * std::numbers::pi, guess, 0.5 + 0.5 * n);
}

std::vector<double> EdgePropagator::dirichlet_eigenvalues(int count, std::span<const double> guesses,
                                                          double width) const {
  std::vector<double> out(count);
  for (int n = 1; n <= count; ++n) {
    if (guesses.size() == static_cast<std::size_t>(count))
      out[n - 1] = eigenvalue_for_phase(n * std::numbers::pi, guesses[n - 1], width);
    else
      out[n - 1] = dirichlet_eigenvalue(n);
  }
  return out;
}

std::vector<double> EdgePropagator::neumann_eigenvalues(int count, std::span<const double> guesses,
                                                        double width) const {
  std::vector<double> out(count);
  for (int n = 0; n < count; ++n) {
    if (guesses.size() == static_cast<std::size_t>(count))
      out[n] = eigenvalue_for_phase((n + 0.5) * std::numbers::pi, guesses[n], width);
    else
      out[n] = neumann_eigenvalue(n);
  }
  return out;
}

BoundarySample solve_edge(const GridFunction& q, double lambda) {
  return EdgePropagator(q).solve(lambda);
}

std::vector<BoundarySample> solve_edge_batch(const GridFunction& q,
                                             std::span<const double> lambdas) {
  const EdgePropagator propagator(q);
  std::vector<BoundarySample> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) out.push_back(propagator.solve(lambda));
  return out;
}

}  // namespace starinv
