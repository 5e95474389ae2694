#pragma once

#include "starinv/graph_forward.hpp"
#include "starinv/grid_function.hpp"
#include "starinv/reconstructor.hpp"
#include "starinv/sl_core.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace fixtures {

inline constexpr double pi = std::numbers::pi;

// Classical RK4 on -y'' + q y = lambda y, y(0) = 0, y'(0) = 1, with q
// evaluated pointwise. Independent of the library's cell propagators.
inline std::pair<double, double> rk4_shoot(const std::function<double(double)>& q, double lambda,
                                           int steps = 4000) {
  const double h = pi / steps;
  double y = 0.0, p = 1.0, x = 0.0;
  auto f = [&](double xx, double yy) { return (q(xx) - lambda) * yy; };
  for (int i = 0; i < steps; ++i) {
    const double k1y = p, k1p = f(x, y);
    const double k2y = p + 0.5 * h * k1p, k2p = f(x + 0.5 * h, y + 0.5 * h * k1y);
    const double k3y = p + 0.5 * h * k2p, k3p = f(x + 0.5 * h, y + 0.5 * h * k2y);
    const double k4y = p + h * k3p, k4p = f(x + h, y + h * k3y);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    x += h;
  }
  return {y, p};
}

// Delta(lambda) assembled from RK4 endpoint values.
inline double rk4_delta(const std::vector<std::function<double(double)>>& qs, double lambda,
                        int steps = 2000) {
  std::vector<std::pair<double, double>> s;
  for (const auto& q : qs) s.push_back(rk4_shoot(q, lambda, steps));
  double prod = 1.0;
  for (std::size_t j = 1; j < s.size(); ++j) prod *= s[j].first;
  double sum = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    double term = s[j].second;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (i != j) term *= s[i].first;
    sum += term;
  }
  return s[0].second * prod + s[0].first * sum;
}

inline double cos_plus_two(double x) { return std::cos(x) + 2.0; }
inline double one(double) { return 1.0; }
inline double identity(double x) { return x; }

inline starinv::GridFunction fixture_q1() { return starinv::GridFunction::sample(cos_plus_two); }
inline starinv::GridFunction fixture_q2() { return starinv::GridFunction::constant(1.0); }
inline starinv::GridFunction fixture_q3() { return starinv::GridFunction::sample(identity); }

// m = 3: q1 = cos x + 2, q2 = 1, q3 = x.
inline const starinv::StarGraphProblem& fixture_problem() {
  static const starinv::StarGraphProblem p({fixture_q1(), fixture_q2(), fixture_q3()});
  return p;
}

// Fixture spectrum with n <= 61 in every family.
inline const starinv::SpectrumTable& fixture_spectrum() {
  static const starinv::SpectrumTable t = starinv::compute_spectrum(fixture_problem(), 61);
  return t;
}

inline std::vector<double> head(const std::vector<double>& v, int count) {
  return {v.begin(), v.begin() + count};
}

// Inverse-problem input truncated for a given n_max.
inline std::pair<std::vector<double>, std::vector<double>> families(const starinv::SpectrumTable& t,
                                                                    int n_max) {
  return {head(t.family(1), n_max + 1), head(t.family(2), n_max)};
}

inline starinv::ReconstructionResult fixture_inverse(int n_max) {
  const auto [l1, l2] = families(fixture_spectrum(), n_max);
  return starinv::full_inverse({fixture_q2(), fixture_q3()}, l1, l2, {n_max, 12});
}

// Cauchy data of q1 recovered by the moment solver from exact spectra of the
// star with q2 = 1, q3 = x.
inline starinv::MomentSolution synthetic_cauchy(const starinv::GridFunction& q1, int n_max) {
  using namespace starinv;
  const StarGraphProblem p({q1, fixture_q2(), fixture_q3()});
  const SpectrumTable t = compute_spectrum(p, n_max + 1);
  const SpectrumTable part =
      make_partial_table(head(t.family(1), n_max + 1), head(t.family(2), n_max));
  const GTable g = aggregate_g({fixture_q2(), fixture_q3()}, part);
  return solve_moments(build_moment_system(part, g, integrate_potential(q1), n_max));
}

}  // namespace fixtures
