#include "starinv/reconstructor.hpp"

#include "starinv/entire.hpp"
#include "starinv/errors.hpp"
#include "starinv/roots.hpp"
#include "starinv/sl_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace starinv {

EndpointFunctions::EndpointFunctions(const CauchyData& cauchy) : cauchy_(cauchy) {
  if (!cauchy.n_func.same_grid(cauchy.k_func))
    throw SpectralError(ErrorKind::InvalidInput, "N and K must share one grid");
  const int p = cauchy.k_func.n_points();
  const Eigen::VectorXd w = trapezoid_weights(p);
  const double integral = w.dot(cauchy.k_func.values());
  const double gap = cauchy.omega - integral;
  if (std::abs(gap) > 1e-6 * (1.0 + std::abs(cauchy.omega))) {
    std::ostringstream msg;
    msg << "integral of K is " << integral << " but omega is " << cauchy.omega;
    throw SpectralError(ErrorKind::OmegaMismatch, msg.str());
  }
  cauchy_.k_func = cauchy.k_func + gap / std::numbers::pi;
  t_ = grid_nodes(p);
  weighted_n_ = w.cwiseProduct(cauchy_.n_func.values());
  weighted_k_ = w.cwiseProduct(cauchy_.k_func.values());
}

double EndpointFunctions::s(double lambda) const {
  // int K = omega folds the omega cos(rho pi)/rho^2 term into the integral,
  // which keeps the expression entire at lambda = 0.
  constexpr double pi = std::numbers::pi;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t_.size(); ++i)
    sum += weighted_k_[i] * cos_difference_over_mu(lambda, t_[i], pi);
  return sinc_entire(lambda, pi) + sum;
}

double EndpointFunctions::s_prime(double lambda) const {
  constexpr double pi = std::numbers::pi;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t_.size(); ++i) sum += weighted_n_[i] * sinc_entire(lambda, t_[i]);
  return cos_entire(lambda, pi) + cauchy_.omega * sinc_entire(lambda, pi) + sum;
}

WeylValue weyl_m1(const EndpointFunctions& ef, double lambda) {
  return weyl_from_sample(ef.sample(lambda), lambda);
}

TwoSpectra extract_two_spectra(const EndpointFunctions& ef, int n_count) {
  if (n_count < 1) throw SpectralError(ErrorKind::InvalidInput, "n_count must be >= 1");
  auto lambda_of = [](double s) { return s * std::abs(s); };

  // Both functions are positive far to the left of the spectrum.
  double s_lo = -10.0;
  while ((ef.s(lambda_of(s_lo)) <= 0 || ef.s_prime(lambda_of(s_lo)) <= 0) && s_lo > -100.0)
    s_lo *= 2.0;

  struct Zero {
    double lambda;
    bool dirichlet;
  };
  std::vector<Zero> zeros;
  int found_mu = 0, found_nu = 0;
  const double step = std::numbers::pi / 40.0;
  const double s_hi = n_count + 10.0;
  double prev_l = lambda_of(s_lo);
  double prev_s = ef.s(prev_l), prev_sp = ef.s_prime(prev_l);
  for (double s = s_lo + step; s <= s_hi && (found_mu < n_count || found_nu < n_count);
       s += step) {
    const double l = lambda_of(s);
    const double cur_s = ef.s(l), cur_sp = ef.s_prime(l);
    if ((cur_s > 0) != (prev_s > 0)) {
      auto f = [&](double x) { return ef.s(x); };
      zeros.push_back({brent_root(f, prev_l, l, prev_s, cur_s), true});
      ++found_mu;
    }
    if ((cur_sp > 0) != (prev_sp > 0)) {
      auto f = [&](double x) { return ef.s_prime(x); };
      zeros.push_back({brent_root(f, prev_l, l, prev_sp, cur_sp), false});
      ++found_nu;
    }
    prev_l = l;
    prev_s = cur_s;
    prev_sp = cur_sp;
  }
  std::sort(zeros.begin(), zeros.end(),
            [](const Zero& a, const Zero& b) { return a.lambda < b.lambda; });

  TwoSpectra out;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const bool expect_dirichlet = (i % 2) == 1;
    if (zeros[i].dirichlet != expect_dirichlet) {
      std::ostringstream msg;
      msg << "zeros of S_1(pi, .) and S_1'(pi, .) do not interlace near lambda = "
          << zeros[i].lambda;
      throw SpectralError(ErrorKind::InterlacingViolation, msg.str());
    }
    auto& list = zeros[i].dirichlet ? out.mu : out.nu;
    if (int(list.size()) < n_count) list.push_back(zeros[i].lambda);
  }
  if (int(out.mu.size()) < n_count || int(out.nu.size()) < n_count)
    throw SpectralError(ErrorKind::InterlacingViolation,
                        "endpoint functions have fewer zeros than requested");
  return out;
}

TwoSpectra two_spectra_of(const GridFunction& q, int n_count) {
  const EdgePropagator edge(q);
  return {edge.dirichlet_eigenvalues(n_count), edge.neumann_eigenvalues(n_count)};
}

namespace {

constexpr double kFdStep = 1e-6;
constexpr int kMaxIterations = 40;
constexpr double kRelativeOffset = 1e-4;

class SpectralFit {
 public:
  SpectralFit(const TwoSpectra& data, int basis_dim, int n_points)
      : data_(data), basis_(n_points, basis_dim + 1) {
    const Eigen::VectorXd x = grid_nodes(n_points);
    for (int i = 0; i <= basis_dim; ++i) basis_.col(i) = (double(i) * x).array().cos();
    target_.resize(Eigen::Index(data.mu.size() + data.nu.size()));
    for (std::size_t i = 0; i < data.mu.size(); ++i) target_[Eigen::Index(i)] = data.mu[i];
    for (std::size_t i = 0; i < data.nu.size(); ++i)
      target_[Eigen::Index(data.mu.size() + i)] = data.nu[i];
  }

  GridFunction potential(const Eigen::VectorXd& c) const { return GridFunction(basis_ * c); }

  // Spectra of the potential with coefficients c, started from `guess`.
  Eigen::VectorXd forward(const Eigen::VectorXd& c, const Eigen::VectorXd& guess,
                          double width) const {
    const EdgePropagator edge(potential(c));
    const std::size_t nm = data_.mu.size(), nn = data_.nu.size();
    std::vector<double> mu, nu;
    if (guess.size() == 0) {
      mu = edge.dirichlet_eigenvalues(int(nm));
      nu = edge.neumann_eigenvalues(int(nn));
    } else {
      mu = edge.dirichlet_eigenvalues(int(nm), std::span(guess.data(), nm), width);
      nu = edge.neumann_eigenvalues(int(nn), std::span(guess.data() + nm, nn), width);
    }
    Eigen::VectorXd out(Eigen::Index(nm + nn));
    for (std::size_t i = 0; i < nm; ++i) out[Eigen::Index(i)] = mu[i];
    for (std::size_t i = 0; i < nn; ++i) out[Eigen::Index(nm + i)] = nu[i];
    return out;
  }

  const Eigen::VectorXd& target() const { return target_; }

 private:
  const TwoSpectra& data_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd target_;
};

}  // namespace

PotentialFit recover_potential(const TwoSpectra& ts, int basis_dim, int n_points) {
  if (basis_dim < 0) throw SpectralError(ErrorKind::InvalidInput, "basis_dim must be >= 0");
  if (ts.mu.empty() || ts.nu.empty())
    throw SpectralError(ErrorKind::InvalidInput, "two spectra are empty");
  const SpectralFit fit(ts, basis_dim, n_points);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_dim + 1);
  double shift = 0.0;
  for (std::size_t i = 0; i < ts.mu.size(); ++i) {
    const double n = double(i + 1);
    shift += ts.mu[i] - n * n;
  }
  c[0] = shift / double(ts.mu.size());

  Eigen::VectorXd values = fit.forward(c, {}, 0.0);
  Eigen::VectorXd r = values - fit.target();
  double ssr = r.squaredNorm();

  PotentialFit out;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    out.iterations = iter;
    if (ssr < 1e-8) break;
    Eigen::MatrixXd jac(r.size(), c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      Eigen::VectorXd cp = c;
      cp[i] += kFdStep;
      jac.col(i) = (fit.forward(cp, values, 1e-4) - values) / kFdStep;
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    // Relative offset: r is numerically orthogonal to the range of the Jacobian.
    if ((jac * step).norm() <= kRelativeOffset * r.norm()) break;

    bool improved = false;
    double alpha = 1.0;
    for (int halving = 0; halving < 30; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd trial = c + alpha * step;
      Eigen::VectorXd trial_values;
      try {
        trial_values = fit.forward(trial, values, 0.5);
      } catch (const SpectralError&) {
        continue;
      }
      const double trial_ssr = (trial_values - fit.target()).squaredNorm();
      if (trial_ssr < ssr) {
        c = trial;
        values = std::move(trial_values);
        r = values - fit.target();
        ssr = trial_ssr;
        improved = true;
        break;
      }
    }
    const double step_norm = alpha * step.norm();
    if (improved && step_norm < 1e-10) break;
    if (!improved)
      throw SpectralError(ErrorKind::NoConvergence,
                          "Gauss-Newton could not reduce the spectral misfit " +
                              std::to_string(ssr));
    if (iter == kMaxIterations)
      throw SpectralError(ErrorKind::NoConvergence,
                          "Gauss-Newton did not converge in " + std::to_string(kMaxIterations) +
                              " iterations (misfit " + std::to_string(ssr) + ")");
  }
  out.q = fit.potential(c);
  out.coefficients = c;
  out.residual = ssr;
  return out;
}

double estimate_omega_hat(std::span<const double> family1) {
  const std::size_t count = family1.size();
  if (count < 2) throw SpectralError(ErrorKind::InvalidInput, "need at least two k = 1 eigenvalues");
  double num = 0.0, den = 0.0;
  for (std::size_t i = count / 2; i < count; ++i) {
    const double n = double(i + 1);
    const double y = std::numbers::pi * (n - 0.5) * (signed_rho(family1[i]) - n + 0.5);
    const double weight = n * n;
    num += weight * y;
    den += weight;
  }
  return num / den;
}

ReconstructionResult full_inverse(const std::vector<GridFunction>& known,
                                  std::span<const double> lambda1,
                                  std::span<const double> lambda2,
                                  const InverseOptions& options) {
  if (known.empty())
    throw SpectralError(ErrorKind::InvalidInput, "at least one known potential is required");
  if (lambda1.size() < 8 || lambda2.size() < 8)
    throw SpectralError(ErrorKind::InvalidInput, "need at least 8 eigenvalues in each family");
  const int m = int(known.size()) + 1;
  const int n_points = known.front().n_points();
  int n_max = options.n_max > 0 ? options.n_max
                                : int(std::min(lambda1.size() - 1, lambda2.size()));
  if (std::size_t(n_max) + 1 > lambda1.size() || std::size_t(n_max) > lambda2.size())
    throw SpectralError(ErrorKind::MissingEigenvalue,
                        "n_max = " + std::to_string(n_max) +
                            " needs lambda_n1 for n <= n_max + 1 and lambda_n2 for n <= n_max");

  ReconstructionResult result;
  auto& diag = result.diagnostics;
  diag.m = m;
  diag.n_max = n_max;
  diag.basis_dim = options.basis_dim;

  auto run_step = [](int step, auto&& body) {
    try {
      return body();
    } catch (const PipelineError&) {
      throw;
    } catch (const SpectralError& e) {
      throw PipelineError(step, e);
    }
  };

  run_step(1, [&] {
    diag.omega_hat = estimate_omega_hat(lambda1);
    double known_sum = 0.0;
    for (const auto& q : known) known_sum += integrate_potential(q);
    diag.omega1 = m * diag.omega_hat - known_sum;
    return 0;
  });

  const SpectrumTable table = make_partial_table(lambda1, lambda2);
  const GTable g = run_step(3, [&] { return aggregate_g(known, table); });
  diag.infinite_g = g.infinite_count();

  const MomentSolution moments = run_step(4, [&] {
    const MomentSystem system = build_moment_system(table, g, diag.omega1, n_max, n_points);
    MomentSolution solution = solve_moments(system);
    for (std::size_t i = 0; i < system.vectors.size(); ++i) {
      const double row = std::abs(inner_product(solution.cauchy, system.vectors[i]) -
                                  system.targets[i].value);
      diag.max_row_residual = std::max(diag.max_row_residual, row);
    }
    return solution;
  });
  diag.moment_residual = moments.residual;
  diag.gram_min = moments.gram.min_eig;
  diag.gram_max = moments.gram.max_eig;
  diag.l2_distance_to_reference = moments.gram.l2_distance_to_reference;
  result.cauchy = moments.cauchy;

  result.spectra = run_step(5, [&] {
    const EndpointFunctions ef(moments.cauchy);
    return extract_two_spectra(ef, n_max);
  });

  const PotentialFit fit =
      run_step(6, [&] { return recover_potential(result.spectra, options.basis_dim, n_points); });
  result.q1 = fit.q;
  diag.fit_residual = fit.residual;
  diag.fit_iterations = fit.iterations;
  diag.coefficients = fit.coefficients;
  return result;
}

}  // namespace starinv
