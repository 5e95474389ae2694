#include "fixtures.hpp"
#include "starinv/errors.hpp"
#include "starinv/moment_solver.hpp"
#include "starinv/weyl.hpp"

#include <doctest.h>

#include <cmath>

using namespace starinv;
using fixtures::pi;

namespace {

CauchyData zero_cauchy(double omega = 0.0, double k_value = 0.0) {
  return {GridFunction::constant(0.0), GridFunction::constant(k_value), omega};
}

TwoSpectra shifted_free(int count, double c) {
  TwoSpectra ts;
  for (int n = 1; n <= count; ++n) ts.mu.push_back(n * n + c);
  for (int n = 0; n < count; ++n) ts.nu.push_back((n + 0.5) * (n + 0.5) + c);
  return ts;
}

const MomentSolution& cos_cauchy() {
  static const MomentSolution s =
      fixtures::synthetic_cauchy(GridFunction::sample([](double x) { return std::cos(x); }), 60);
  return s;
}

}  // namespace

TEST_SUITE("reconstructor") {

TEST_CASE("endpoint functions of zero Cauchy data") {
  const EndpointFunctions ef(zero_cauchy());
  CHECK(ef.s(0.25) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(ef.s_prime(0.25)) < 1e-14);
  for (double lambda : {-1e-10, 0.0, 1e-10}) {
    CHECK(ef.s(lambda) == doctest::Approx(pi).epsilon(1e-9));
    CHECK(ef.s_prime(lambda) == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (double lambda : {-3.0, 2.0, 17.0, 400.0}) {
    const double rho = std::sqrt(std::abs(lambda));
    const double s = lambda > 0 ? std::sin(rho * pi) / rho : std::sinh(rho * pi) / rho;
    const double sp = lambda > 0 ? std::cos(rho * pi) : std::cosh(rho * pi);
    CHECK(ef.s(lambda) == doctest::Approx(s).epsilon(1e-12).scale(1e-12));
    CHECK(ef.s_prime(lambda) == doctest::Approx(sp).epsilon(1e-12).scale(1e-12));
  }
}

TEST_CASE("omega consistency of the Cauchy data") {
  CHECK_THROWS_AS(EndpointFunctions(zero_cauchy(1.0)), SpectralError);
  try {
    EndpointFunctions ef(zero_cauchy(1.0));
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::OmegaMismatch);
  }
  // int K = 0.3 pi; a gap of 5e-7 is re-projected
  const double omega = 0.3 * pi + 5e-7;
  const EndpointFunctions ef(zero_cauchy(omega, 0.3));
  CHECK(ef.cauchy().k_func.integrate() == doctest::Approx(omega).epsilon(1e-14));
}

TEST_CASE("endpoint functions entire near lambda = 0 with nonzero data") {
  const auto& cd = cos_cauchy().cauchy;
  const EndpointFunctions ef(cd);
  CHECK(ef.s(1e-9) == doctest::Approx(ef.s(0.0)).epsilon(1e-7));
  CHECK(ef.s(-1e-9) == doctest::Approx(ef.s(0.0)).epsilon(1e-7));
  CHECK(ef.s_prime(1e-9) == doctest::Approx(ef.s_prime(0.0)).epsilon(1e-7));
}

TEST_CASE("endpoint functions match the ODE at lambda = 7") {
  const EndpointFunctions ef(cos_cauchy().cauchy);
  const auto [y, p] = fixtures::rk4_shoot([](double x) { return std::cos(x); }, 7.0, 8000);
  CHECK(std::abs(ef.s(7.0) - y) <= 1e-3);
  CHECK(std::abs(ef.s_prime(7.0) - p) <= 1e-3);
}

TEST_CASE("two spectra of zero Cauchy data") {
  const auto ts = extract_two_spectra(EndpointFunctions(zero_cauchy()), 15);
  REQUIRE(ts.mu.size() == 15);
  REQUIRE(ts.nu.size() == 15);
  for (int n = 1; n <= 15; ++n) CHECK(ts.mu[n - 1] == doctest::Approx(double(n * n)).epsilon(1e-10));
  for (int n = 0; n < 15; ++n) CHECK(ts.nu[n] == doctest::Approx((n + 0.5) * (n + 0.5)).epsilon(1e-10));
}

TEST_CASE("two spectra of a constant potential are shifted") {
  const double c = 0.5;
  const auto sol = fixtures::synthetic_cauchy(GridFunction::constant(c), 60);
  const auto ts = extract_two_spectra(EndpointFunctions(sol.cauchy), 10);
  for (int n = 1; n <= 10; ++n) CHECK(std::abs(ts.mu[n - 1] - (n * n + c)) <= 1e-4);
  for (int n = 0; n < 10; ++n) CHECK(std::abs(ts.nu[n] - ((n + 0.5) * (n + 0.5) + c)) <= 1e-4);
}

TEST_CASE("two spectra for q1 = cos x match a dense ODE scan") {
  const auto ts = extract_two_spectra(EndpointFunctions(cos_cauchy().cauchy), 10);
  auto qf = [](double x) { return std::cos(x); };
  // zeros of S and S' by sign changes in rho and bisection, RK4 oracle
  auto zeros = [&](bool derivative) {
    std::vector<double> out;
    auto f = [&](double rho) {
      const auto s = fixtures::rk4_shoot(qf, rho * std::abs(rho), 1500);
      return derivative ? s.second : s.first;
    };
    double a = -2.0, fa = f(a);
    for (double b = a + pi / 400; out.size() < 10; b += pi / 400) {
      const double fb = f(b);
      if ((fa > 0) != (fb > 0)) {
        double lo = a, hi = b, flo = fa;
        for (int i = 0; i < 60; ++i) {
          const double mid = 0.5 * (lo + hi), fm = f(mid);
          if ((fm > 0) == (flo > 0)) lo = mid, flo = fm;
          else hi = mid;
        }
        const double r = 0.5 * (lo + hi);
        out.push_back(r * std::abs(r));
      }
      a = b;
      fa = fb;
    }
    return out;
  };
  const auto mu = zeros(false), nu = zeros(true);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(ts.mu[i] - mu[i]) <= 1e-4);
    CHECK(std::abs(ts.nu[i] - nu[i]) <= 1e-4);
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(ts.nu[i] < ts.mu[i]);
    if (i + 1 < 10) CHECK(ts.mu[i] < ts.nu[i + 1]);
  }
}

TEST_CASE("non-interlacing zeros are rejected") {
  const CauchyData cd{GridFunction::constant(5.0), GridFunction::constant(0.0), 0.0};
  try {
    extract_two_spectra(EndpointFunctions(cd), 5);
    FAIL("expected InterlacingViolation");
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::InterlacingViolation);
  }
}

TEST_CASE("weyl_m1") {
  const EndpointFunctions ef(zero_cauchy());
  CHECK(std::abs(weyl_m1(ef, 0.25).value) < 1e-14);
  CHECK(weyl_m1(ef, 1.0).pole);

  const auto& t = fixtures::fixture_spectrum();
  const int n_max = 30;
  const auto part = make_partial_table(fixtures::head(t.family(1), n_max + 1),
                                       fixtures::head(t.family(2), n_max));
  const GTable g = aggregate_g({fixtures::fixture_q2(), fixtures::fixture_q3()}, part);
  const auto sol = solve_moments(
      build_moment_system(part, g, integrate_potential(fixtures::fixture_q1()), n_max));
  const EndpointFunctions fixture_ef(sol.cauchy);
  for (int n = 1; n <= n_max; ++n)
    for (int k : {1, 2}) {
      const double gv = g.at(n, k);
      CHECK(std::abs(weyl_m1(fixture_ef, part.lambda(n, k)).value - gv) <= 1e-5 * (1.0 + std::abs(gv)));
    }
}

TEST_CASE("recover_potential on exact two spectra") {
  auto zero = recover_potential(shifted_free(20, 0.0));
  CHECK(zero.q.values().cwiseAbs().maxCoeff() < 1e-6);

  auto one = recover_potential(shifted_free(20, 1.0));
  CHECK((one.q.values().array() - 1.0).abs().maxCoeff() < 1e-6);

  const auto q = GridFunction::sample([](double x) { return std::cos(x); });
  const auto fit = recover_potential(two_spectra_of(q, 30));
  CHECK((fit.q - q).l2_norm() <= 1e-2);
  CHECK(fit.coefficients[1] == doctest::Approx(1.0).epsilon(1e-2));

  CHECK_THROWS_AS(recover_potential(TwoSpectra{}), SpectralError);
}

TEST_CASE("finite-difference Jacobian agrees with central differences") {
  const auto q = GridFunction::sample([](double x) { return std::cos(x); });
  const int count = 8;
  for (int i : {0, 1, 3}) {
    auto spectra = [&](double h) {
      const auto qi = GridFunction::sample([&](double x) { return std::cos(x) + h * std::cos(i * x); });
      return two_spectra_of(qi, count);
    };
    const auto base = spectra(0.0), fwd = spectra(1e-6), plus = spectra(1e-4), minus = spectra(-1e-4);
    for (int n = 0; n < count; ++n) {
      const double forward = (fwd.mu[n] - base.mu[n]) / 1e-6;
      const double central = (plus.mu[n] - minus.mu[n]) / 2e-4;
      CHECK(forward == doctest::Approx(central).epsilon(1e-3).scale(1e-3));
    }
  }
}

TEST_CASE("full_inverse: Hochstadt-Lieberman case m = 2") {
  const StarGraphProblem p({GridFunction::constant(0.0), GridFunction::constant(0.0)});
  const auto t = compute_spectrum(p, 21);
  const auto [l1, l2] = fixtures::families(t, 20);
  const auto r = full_inverse({GridFunction::constant(0.0)}, l1, l2);
  CHECK(r.q1.l2_norm() <= 1e-3);
  CHECK(r.diagnostics.m == 2);
  CHECK(r.diagnostics.n_max == 20);
}

TEST_CASE("full_inverse: fixture round trip") {
  const auto r = fixtures::fixture_inverse(30);
  const auto q1 = fixtures::fixture_q1();
  CHECK((r.q1 - q1).l2_norm() <= 5e-2);

  // omega chain
  CHECK(std::abs(r.diagnostics.omega1 - integrate_potential(r.q1)) <= 5e-2);

  // steps 5 and 6 agree
  const auto rec = two_spectra_of(r.q1, 30);
  const double tol = std::sqrt(r.diagnostics.fit_residual) + 1e-8;
  for (int n = 0; n < 30; ++n) CHECK(std::abs(rec.mu[n] - r.spectra.mu[n]) <= tol);

  // the input eigenvalues are zeros of the reconstructed characteristic function
  const EndpointFunctions ef(r.cauchy);
  const auto [l1, l2] = fixtures::families(fixtures::fixture_spectrum(), 30);
  std::vector<double> lambdas(l1.begin(), l1.end());
  lambdas.insert(lambdas.end(), l2.begin(), l2.end());
  for (double lambda : lambdas) {
    const auto s2 = solve_edge(fixtures::fixture_q2(), lambda);
    const auto s3 = solve_edge(fixtures::fixture_q3(), lambda);
    const double a = ef.s_prime(lambda) * s2.s_end * s3.s_end;
    const double b = ef.s(lambda) * (s2.s_prime_end * s3.s_end + s3.s_prime_end * s2.s_end);
    CHECK(std::abs(a + b) <= 1e-5 * (std::abs(a) + std::abs(b)));
  }
}

TEST_CASE("full_inverse: error decreases with n_max") {
  const auto q1 = fixtures::fixture_q1();
  const double e10 = (fixtures::fixture_inverse(10).q1 - q1).l2_norm();
  const double e20 = (fixtures::fixture_inverse(20).q1 - q1).l2_norm();
  const double e40 = (fixtures::fixture_inverse(40).q1 - q1).l2_norm();
  CHECK(e20 < e10);
  CHECK(e40 < e20);
}

TEST_CASE("full_inverse: duplicated eigenvalue fails at step 4") {
  auto [l1, l2] = fixtures::families(fixtures::fixture_spectrum(), 20);
  l2[3] = l1[4];
  try {
    full_inverse({fixtures::fixture_q2(), fixtures::fixture_q3()}, l1, l2);
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.step() == 4);
    CHECK(e.kind() == ErrorKind::NotABasis);
    const std::string msg = e.what();
    CHECK(msg.find("step 4") != std::string::npos);
    CHECK(msg.find("assumption (i)") != std::string::npos);
  }
}

TEST_CASE("full_inverse: input validation") {
  const auto [l1, l2] = fixtures::families(fixtures::fixture_spectrum(), 20);
  const std::vector<GridFunction> known{fixtures::fixture_q2(), fixtures::fixture_q3()};
  const std::vector<double> short_list(l2.begin(), l2.begin() + 5);
  CHECK_THROWS_AS(full_inverse(known, l1, short_list), SpectralError);
  CHECK_THROWS_AS(full_inverse({}, l1, l2), SpectralError);
  try {
    full_inverse(known, l1, l2, {25, 12});
    FAIL("expected MissingEigenvalue");
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::MissingEigenvalue);
  }
}

TEST_CASE("estimate_omega_hat") {
  const auto& t = fixtures::fixture_spectrum();
  const double truth = fixtures::fixture_problem().omega_hat();
  CHECK(std::abs(estimate_omega_hat(fixtures::head(t.family(1), 41)) - truth) <= 2e-2);
  std::vector<double> free;
  for (int n = 1; n <= 20; ++n) free.push_back((n - 0.5) * (n - 0.5));
  CHECK(std::abs(estimate_omega_hat(free)) < 1e-12);
}

}
