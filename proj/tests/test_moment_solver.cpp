#include "fixtures.hpp"
#include "starinv/errors.hpp"
#include "starinv/moment_solver.hpp"
#include "starinv/weyl.hpp"

#include <doctest.h>

#include <cmath>

using namespace starinv;
using fixtures::pi;

namespace {

struct Synthetic {
  SpectrumTable part;
  GTable g;
  double omega;
};

// q1 on edge 1 with q2 = 1 and q3 = x as the known edges.
Synthetic synthetic(const GridFunction& q1, int n_max) {
  const StarGraphProblem p({q1, fixtures::fixture_q2(), fixtures::fixture_q3()});
  const SpectrumTable t = compute_spectrum(p, n_max + 1);
  Synthetic s;
  s.part = make_partial_table(fixtures::head(t.family(1), n_max + 1), fixtures::head(t.family(2), n_max));
  s.g = aggregate_g({fixtures::fixture_q2(), fixtures::fixture_q3()}, s.part);
  s.omega = integrate_potential(q1);
  return s;
}

MomentSystem system_for(const Synthetic& s, int n_max) {
  return build_moment_system(s.part, s.g, s.omega, n_max);
}

MomentSystem reference_system(int n_max) {
  MomentSystem sys;
  sys.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) sys.vectors.push_back(reference_basis(n, 1));
  for (int n = 0; n <= n_max; ++n) sys.vectors.push_back(reference_basis(n, 2));
  for (const auto& v : sys.vectors) sys.targets.push_back({0.0, v.n, v.k});
  return sys;
}

double h_norm(const Eigen::VectorXd& top, const Eigen::VectorXd& bottom) {
  const Eigen::VectorXd w = trapezoid_weights(int(top.size()));
  return std::sqrt(w.dot(top.cwiseAbs2()) + w.dot(bottom.cwiseAbs2()));
}

double cauchy_distance(const CauchyData& a, const CauchyData& b) {
  return h_norm(a.n_func.values() - b.n_func.values(), a.k_func.values() - b.k_func.values());
}

}  // namespace

TEST_SUITE("moment-solver") {

TEST_CASE("reference_basis") {
  const auto v02 = reference_basis(0, 2);
  CHECK(v02.top.cwiseAbs().maxCoeff() == 0.0);
  CHECK((v02.bottom.array() == 1.0).all());

  const auto v01 = reference_basis(0, 1);
  const Eigen::VectorXd t = grid_nodes(kDefaultGridPoints);
  CHECK((v01.top - (0.5 * t).array().sin().matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(v01.bottom.cwiseAbs().maxCoeff() == 0.0);

  for (int n : {0, 1, 7, 30}) {
    const auto v = reference_basis(n, 1);
    CHECK(h_norm(v.top, v.bottom) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-12));
  }
  CHECK(std::sqrt(pi / 2) == doctest::Approx(1.2533).epsilon(1e-4));
  CHECK_THROWS_AS(reference_basis(-1, 1), SpectralError);
}

TEST_CASE("build_moment_system layout") {
  const auto s = synthetic(fixtures::fixture_q1(), 6);
  const auto sys = system_for(s, 6);
  REQUIRE(sys.vectors.size() == 2 * 6 + 2);
  REQUIRE(sys.targets.size() == sys.vectors.size());
  CHECK(sys.vectors[0].n == 0);
  CHECK(sys.vectors[0].k == 1);

  const auto& c = sys.vectors[7];
  CHECK(c.n == 0);
  CHECK(c.k == 2);
  CHECK(c.form == RowForm::Constant);
  CHECK(c.top.cwiseAbs().maxCoeff() == 0.0);
  CHECK((c.bottom.array() == 1.0).all());
  CHECK(sys.targets[7].value == s.omega);

  // k = 1 rows use lambda_{n+1,1}
  const double rho = std::sqrt(s.part.lambda(3, 1));
  const Eigen::VectorXd t = grid_nodes(kDefaultGridPoints);
  CHECK((sys.vectors[2].top - (rho * t).array().sin().matrix()).cwiseAbs().maxCoeff() < 1e-14);
  const double g = s.g.at(3, 1);
  CHECK((sys.vectors[2].bottom - (g / rho * (rho * t).array().cos()).matrix()).cwiseAbs().maxCoeff() <
        1e-14);

  CHECK_THROWS_AS(build_moment_system(s.part, s.g, s.omega, 7), SpectralError);
}

TEST_CASE("infinite g row uses the cosine limit") {
  SpectrumTable part;
  for (int n = 1; n <= 3; ++n) part.entries.push_back({n, 1, (n - 0.5) * (n - 0.5), 1});
  for (int n = 1; n <= 2; ++n) part.entries.push_back({n, 2, double(n * n) + 0.1, 1});
  GTable g;
  for (int n = 1; n <= 3; ++n) g.set(n, 1, 0.2);
  g.set_infinite(1, 2);
  g.set(2, 2, 3.0);
  const double omega = 0.4;
  const auto sys = build_moment_system(part, g, omega, 2);
  const auto& row = sys.vectors[4];
  REQUIRE(row.n == 1);
  REQUIRE(row.k == 2);
  CHECK(row.form == RowForm::Unnormalized);
  CHECK(row.top.cwiseAbs().maxCoeff() == 0.0);
  const double rho = std::sqrt(1.1);
  const Eigen::VectorXd t = grid_nodes(kDefaultGridPoints);
  const Eigen::VectorXd cosine = (rho * t).array().cos();
  const double scale = row.bottom[0];
  CHECK((row.bottom - scale * cosine).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(h_norm(row.top, row.bottom) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-12));
  const double limit = -rho * std::sin(rho * pi) + omega * std::cos(rho * pi);
  CHECK(sys.targets[4].value == doctest::Approx(scale * limit).epsilon(1e-12));
}

TEST_CASE("nonpositive eigenvalue names assumption (ii)") {
  SpectrumTable part;
  for (int n = 1; n <= 2; ++n) part.entries.push_back({n, 1, n == 1 ? -0.5 : 2.25, 1});
  part.entries.push_back({1, 2, 1.0, 1});
  GTable g;
  g.set(1, 1, 0.0);
  g.set(2, 1, 0.0);
  g.set(1, 2, 1.0);
  try {
    build_moment_system(part, g, 0.0, 1);
    FAIL("expected InvalidInput");
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("assumption (ii)") != std::string::npos);
  }
}

TEST_CASE("Gram of the reference basis") {
  const auto rep = gram_condition_report(reference_system(20));
  CHECK(rep.min_eig == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(rep.max_eig == doctest::Approx(pi).epsilon(1e-10));
  CHECK(rep.l2_distance_to_reference == 0.0);
}

TEST_CASE("duplicated row is not a basis") {
  auto sys = reference_system(5);
  sys.vectors.push_back(sys.vectors[3]);
  sys.targets.push_back(sys.targets[3]);
  CHECK_THROWS_AS(gram_condition_report(sys), SpectralError);
  try {
    solve_moments(sys);
    FAIL("expected NotABasis");
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::NotABasis);
    CHECK(std::string(e.what()).find("assumption (i)") != std::string::npos);
  }
}

TEST_CASE("fixture Gram regression baseline") {
  const auto s = synthetic(fixtures::fixture_q1(), 30);
  const auto rep = gram_condition_report(system_for(s, 30));
  CHECK(rep.min_eig > 0.1 * pi / 2);
  CHECK(rep.min_eig == doctest::Approx(0.495156).epsilon(1e-4));
  CHECK(rep.max_eig == doctest::Approx(5.26169).epsilon(1e-4));
  CHECK(std::isfinite(rep.l2_distance_to_reference));
}

TEST_CASE("zero targets give zero Cauchy data") {
  const auto sol = solve_moments(reference_system(10));
  CHECK(sol.cauchy.n_func.values().cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.cauchy.k_func.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("q1 = 0 has vanishing targets and Cauchy data") {
  const auto s = synthetic(GridFunction::constant(0.0), 30);
  const auto sys = system_for(s, 30);
  for (const auto& t : sys.targets) CHECK(std::abs(t.value) < 1e-9);
  const auto sol = solve_moments(sys);
  CHECK(sol.cauchy.n_func.l2_norm() <= 1e-3);
  CHECK(sol.cauchy.k_func.l2_norm() <= 1e-3);
}

TEST_CASE("fixture targets decay in n") {
  const auto s = synthetic(fixtures::fixture_q1(), 30);
  const auto sys = system_for(s, 30);
  double head = 0.0, tail = 0.0;
  for (const auto& t : sys.targets) {
    if (t.n >= 1 && t.n <= 10) head = std::max(head, std::abs(t.value));
    if (t.n >= 20) tail = std::max(tail, std::abs(t.value));
  }
  CHECK(tail < head);
}

TEST_CASE("recovered Cauchy data rebuild S_1 for q1 = cos x") {
  const auto q1 = GridFunction::sample([](double x) { return std::cos(x); });
  const auto s = synthetic(q1, 30);
  const auto sol = solve_moments(system_for(s, 30));
  const EndpointFunctions ef(sol.cauchy);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double lambda = -5.0 + 7.3 * i;
    const double ref = fixtures::rk4_shoot([](double x) { return std::cos(x); }, lambda, 8000).first;
    worst = std::max(worst, std::abs(ef.s(lambda) - ref) / std::abs(ref));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("moment residuals and the omega constraint") {
  const auto s = synthetic(fixtures::fixture_q1(), 30);
  const auto sys = system_for(s, 30);
  const auto sol = solve_moments(sys);
  for (std::size_t i = 0; i < sys.vectors.size(); ++i) {
    const double f = sys.targets[i].value;
    CHECK(std::abs(inner_product(sol.cauchy, sys.vectors[i]) - f) <= 1e-6 * (1.0 + std::abs(f)));
  }
  CHECK(std::abs(sol.cauchy.k_func.integrate() - s.omega) <= 1e-8);
  CHECK(sol.cauchy.omega == s.omega);
}

TEST_CASE("l2 closeness: tail share of the distance to the reference basis shrinks") {
  const auto s = synthetic(fixtures::fixture_q1(), 40);
  const auto rep = gram_condition_report(system_for(s, 40));
  auto partial = [&](int upto) {
    double sum = 0.0;
    const auto sys = system_for(s, 40);
    for (std::size_t i = 0; i < sys.vectors.size(); ++i)
      if (sys.vectors[i].n <= upto) sum += rep.row_distances_sq[i];
    return sum;
  };
  const double r1 = partial(10) / partial(5);
  const double r2 = partial(20) / partial(10);
  const double r3 = partial(40) / partial(20);
  CHECK(r2 < r1);
  CHECK(r3 < r2);
}

TEST_CASE("truncation convergence of the Cauchy data") {
  const auto s = synthetic(fixtures::fixture_q1(), 80);
  auto solve = [&](int n) { return solve_moments(system_for(s, n)).cauchy; };
  const auto f10 = solve(10), f20 = solve(20), f40 = solve(40), f80 = solve(80);
  const double d1 = cauchy_distance(f10, f20);
  const double d2 = cauchy_distance(f20, f40);
  const double d3 = cauchy_distance(f40, f80);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
}

TEST_CASE("scaling a row and its target leaves the solution unchanged") {
  const auto s = synthetic(fixtures::fixture_q1(), 12);
  auto sys = system_for(s, 12);
  const auto base = solve_moments(sys).cauchy;
  for (std::size_t row : {std::size_t(0), std::size_t(5), std::size_t(13), std::size_t(20)}) {
    auto scaled = sys;
    scaled.vectors[row].top *= -3.7;
    scaled.vectors[row].bottom *= -3.7;
    scaled.targets[row].value *= -3.7;
    CHECK(cauchy_distance(solve_moments(scaled).cauchy, base) <= 1e-9);
  }
}

}
