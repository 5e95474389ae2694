#include "starinv/graph_forward.hpp"

#include "starinv/errors.hpp"
#include "starinv/roots.hpp"
#include "starinv/sl_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace starinv {

namespace {

constexpr double kMergeRho = 1e-6;

struct PoleGroup {
  double value;
  int count;
};

// Sorted values grouped into clusters whose consecutive members are closer
// than kMergeRho in rho.
std::vector<PoleGroup> group_close(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<PoleGroup> groups;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() &&
           std::abs(signed_rho(values[j]) - signed_rho(values[j - 1])) < kMergeRho)
      ++j;
    double sum = 0.0;
    for (std::size_t t = i; t < j; ++t) sum += values[t];
    groups.push_back({sum / double(j - i), int(j - i)});
    i = j;
  }
  return groups;
}

// Sum of edge Weyl functions. Increasing between consecutive Dirichlet
// poles, from -inf to +inf.
double weyl_sum(const std::vector<EdgePropagator>& edges, double lambda) {
  double sum = 0.0;
  for (const auto& edge : edges) {
    const BoundarySample s = edge.solve(lambda);
    sum -= s.s_prime_end / s.s_end;
  }
  return sum;
}

double root_between(const std::vector<EdgePropagator>& edges, double a, double b) {
  auto f = [&](double lambda) { return weyl_sum(edges, lambda); };
  const double width = b - a;
  double delta = 1e-10 * width;
  double xl = a + delta, fl = f(xl);
  while (!(fl < 0) && delta < 0.25 * width) {
    delta *= 10;
    xl = a + delta;
    fl = f(xl);
  }
  delta = 1e-10 * width;
  double xr = b - delta, fr = f(xr);
  while (!(fr > 0) && delta < 0.25 * width) {
    delta *= 10;
    xr = b - delta;
    fr = f(xr);
  }
  if (!(fl < 0) || !(fr > 0)) {
    // The root hugs one of the poles closer than the probe distance.
    if (!(fl < 0)) return a + 0.5e-10 * width;
    return b - 0.5e-10 * width;
  }
  return brent_root(f, xl, xr, fl, fr);
}

}  // namespace

double signed_rho(double lambda) {
  return lambda >= 0 ? std::sqrt(lambda) : -std::sqrt(-lambda);
}

StarGraphProblem::StarGraphProblem(std::vector<GridFunction> potentials)
    : potentials_(std::move(potentials)) {
  if (potentials_.size() < 2)
    throw SpectralError(ErrorKind::InvalidInput, "a star graph needs at least two edges");
  for (const auto& q : potentials_)
    if (!q.same_grid(potentials_.front()))
      throw SpectralError(ErrorKind::InvalidInput, "all potentials must share one grid");
}

std::vector<double> StarGraphProblem::omegas() const {
  std::vector<double> out;
  for (const auto& q : potentials_) out.push_back(integrate_potential(q));
  return out;
}

double StarGraphProblem::omega_hat() const {
  const auto w = omegas();
  double sum = 0.0;
  for (double v : w) sum += v;
  return sum / m();
}

const SpectrumEntry* SpectrumTable::find(int n, int k) const {
  for (const auto& e : entries)
    if (e.n == n && e.k == k) return &e;
  return nullptr;
}

double SpectrumTable::lambda(int n, int k) const {
  const SpectrumEntry* e = find(n, k);
  if (!e)
    throw SpectralError(ErrorKind::MissingEigenvalue,
                        "missing eigenvalue lambda_" + std::to_string(n) + "," + std::to_string(k));
  return e->lambda;
}

std::vector<double> SpectrumTable::family(int k) const {
  std::vector<double> out;
  for (int n = 1; const SpectrumEntry* e = find(n, k); ++n) out.push_back(e->lambda);
  return out;
}

int SpectrumTable::max_n(int k) const {
  int best = 0;
  for (const auto& e : entries)
    if (e.k == k) best = std::max(best, e.n);
  return best;
}

std::vector<double> SpectrumTable::residuals(int k) const {
  std::vector<double> out;
  const auto lambdas = family(k);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double n = double(i + 1);
    const double rho = signed_rho(lambdas[i]);
    double main;
    if (k == 1)
      main = n - 0.5 + omega_hat / (std::numbers::pi * n);
    else
      main = n + z_roots.at(k - 2) / (std::numbers::pi * n);
    out.push_back(n * (rho - main));
  }
  return out;
}

void SpectrumTable::sort() {
  std::sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return a.k != b.k ? a.k < b.k : a.n < b.n;
  });
}

SpectrumTable make_partial_table(std::span<const double> family1, std::span<const double> family2) {
  SpectrumTable table;
  table.omega_hat = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < family1.size(); ++i)
    table.entries.push_back({int(i + 1), 1, family1[i], 1});
  for (std::size_t i = 0; i < family2.size(); ++i)
    table.entries.push_back({int(i + 1), 2, family2[i], 1});
  return table;
}

double characteristic_delta(const StarGraphProblem& problem, double lambda) {
  std::vector<BoundarySample> s;
  for (const auto& q : problem.potentials()) s.push_back(solve_edge(q, lambda));
  const int m = problem.m();
  double tail_product = 1.0;
  for (int j = 1; j < m; ++j) tail_product *= s[j].s_end;
  double tail_sum = 0.0;
  for (int j = 1; j < m; ++j) {
    double term = s[j].s_prime_end;
    for (int k = 1; k < m; ++k)
      if (k != j) term *= s[k].s_end;
    tail_sum += term;
  }
  return s[0].s_prime_end * tail_product + s[0].s_end * tail_sum;
}

std::vector<double> char_poly_roots(std::span<const double> omegas) {
  if (omegas.size() < 2)
    throw SpectralError(ErrorKind::InvalidInput, "characteristic polynomial needs m >= 2");
  std::vector<double> w(omegas.begin(), omegas.end());
  std::sort(w.begin(), w.end());
  double scale = 1.0;
  for (double v : w) scale = std::max(scale, std::abs(v));

  std::vector<PoleGroup> groups;
  for (double v : w) {
    if (!groups.empty() && std::abs(v - groups.back().value) <= 1e-12 * scale)
      ++groups.back().count;
    else
      groups.push_back({v, 1});
  }

  // P(z) / prod(z - w) = sum r_g / (z - w_g): decreasing between groups.
  auto log_derivative = [&](double z) {
    double sum = 0.0;
    for (const auto& g : groups) sum += g.count / (z - g.value);
    return sum;
  };
  std::vector<double> roots;
  for (const auto& g : groups)
    for (int r = 1; r < g.count; ++r) roots.push_back(g.value);
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    const double a = groups[i].value, b = groups[i + 1].value;
    const double delta = 1e-12 * (b - a);
    auto f = [&](double z) { return -log_derivative(z); };
    roots.push_back(brent_root(f, a + delta, b - delta, f(a + delta), f(b - delta)));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

SpectrumTable compute_spectrum(const StarGraphProblem& problem, int n_max) {
  if (n_max < 1) throw SpectralError(ErrorKind::InvalidInput, "n_max must be >= 1");
  const int m = problem.m();
  std::vector<EdgePropagator> edges;
  for (const auto& q : problem.potentials()) edges.emplace_back(q);

  double lower = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) lower = std::min(lower, e.min_potential());
  lower -= 1.0;

  const std::size_t wanted = std::size_t(m) * n_max;
  std::vector<double> eigen;
  for (int per_edge = n_max + 1;; per_edge += 2) {
    std::vector<std::vector<double>> dirichlet;
    double cutoff = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) {
      dirichlet.push_back(e.dirichlet_eigenvalues(per_edge));
      cutoff = std::min(cutoff, dirichlet.back().back());
    }
    std::vector<double> poles;
    const double include_to = cutoff + 2.0 * kMergeRho * std::sqrt(std::max(cutoff, 1.0));
    for (const auto& d : dirichlet)
      for (double p : d)
        if (p <= include_to) poles.push_back(p);
    const auto groups = group_close(poles);

    eigen.clear();
    eigen.push_back(root_between(edges, lower, groups.front().value));
    for (std::size_t i = 0; i + 1 < groups.size(); ++i)
      eigen.push_back(root_between(edges, groups[i].value, groups[i + 1].value));
    for (const auto& g : groups)
      for (int r = 1; r < g.count; ++r) eigen.push_back(g.value);
    if (eigen.size() >= wanted) break;
  }

  const auto clusters = group_close(eigen);
  std::vector<SpectrumEntry> sorted;
  for (const auto& c : clusters)
    for (int r = 0; r < c.count; ++r) sorted.push_back({0, 0, c.value, c.count});
  sorted.resize(wanted);

  SpectrumTable table;
  table.omega_hat = problem.omega_hat();
  const auto omegas = problem.omegas();
  table.z_roots = char_poly_roots(omegas);

  // Blocks of m in ascending order: the lowest member of block n belongs to
  // the k = 1 family, the rest to k = 2..m in ascending order.
  for (int n = 1; n <= n_max; ++n)
    for (int k = 1; k <= m; ++k) {
      SpectrumEntry e = sorted[std::size_t(m) * (n - 1) + (k - 1)];
      e.n = n;
      e.k = k;
      table.entries.push_back(e);
    }

  // Where the asymptotic terms are small against the family spacing, every
  // eigenvalue must sit nearest to a slot of its own block and family.
  double reach = std::abs(table.omega_hat);
  for (double z : table.z_roots) reach = std::max(reach, std::abs(z));
  const int reliable_from = int(std::ceil(8.0 * reach / std::numbers::pi)) + 1;
  auto slot = [&](int n, int k) {
    if (k == 1) return n - 0.5 + table.omega_hat / (std::numbers::pi * n);
    return n + table.z_roots[k - 2] / (std::numbers::pi * n);
  };
  for (const auto& e : table.entries) {
    if (e.n < std::max(reliable_from, 2)) continue;
    const double rho = signed_rho(e.lambda);
    int best_n = 0, best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int n = e.n - 1; n <= e.n + 1; ++n)
      for (int k = 1; k <= m; ++k) {
        const double d = std::abs(rho - slot(n, k));
        if (d < best) {
          best = d;
          best_n = n;
          best_k = k;
        }
      }
    if (best_n != e.n || (best_k == 1) != (e.k == 1)) {
      std::ostringstream msg;
      msg << "eigenvalue " << e.lambda << " counted as (" << e.n << "," << e.k
          << ") lies nearest to the asymptotic slot (" << best_n << "," << best_k << ")";
      throw SpectralError(ErrorKind::NumberingAmbiguity, msg.str());
    }
  }
  table.sort();
  return table;
}

double vanishing_threshold(double lambda) {
  const double a = std::abs(lambda);
  return 1e-8 * (a > 1.0 ? 1.0 / std::sqrt(a) : 1.0);
}

std::string AssumptionReport::summary() const {
  std::ostringstream out;
  auto flag = [](bool ok) { return ok ? "ok" : "VIOLATED"; };
  out << "(i) distinct: " << flag(distinct_ok);
  for (const auto& l : repeated) out << " [" << l.n << "," << l.k << "]";
  out << "\n(ii) positive: " << flag(positive_ok);
  for (const auto& l : nonpositive) out << " [" << l.n << "," << l.k << "]";
  out << "\n(iii) S_j(pi, lambda_nk) != 0: " << flag(s_nonzero_ok);
  for (const auto& l : vanishing) out << " [j=" << l.j << " " << l.n << "," << l.k << "]";
  out << "\n(iv) z_1 != omega_j: " << flag(z1_separated_ok);
  for (int j : z1_coincident_edges) out << " [j=" << j << "]";
  out << "\n(v) S_1(pi,0), S_1'(pi,0) != 0: " << flag(s1_at_zero_ok) << "\n";
  return out.str();
}

AssumptionReport check_assumptions(const StarGraphProblem& problem, const SpectrumTable& table) {
  AssumptionReport report;
  std::vector<const SpectrumEntry*> used;
  for (const auto& e : table.entries)
    if (e.k == 1 || e.k == 2) used.push_back(&e);

  for (const auto* e : used) {
    if (e->multiplicity > 1) report.repeated.push_back({0, e->n, e->k});
  }
  for (std::size_t a = 0; a < used.size(); ++a)
    for (std::size_t b = a + 1; b < used.size(); ++b)
      if (std::abs(signed_rho(used[a]->lambda) - signed_rho(used[b]->lambda)) < kMergeRho) {
        report.repeated.push_back({0, used[a]->n, used[a]->k});
        report.repeated.push_back({0, used[b]->n, used[b]->k});
      }
  report.distinct_ok = report.repeated.empty();

  for (const auto* e : used)
    if (!(e->lambda > 0)) report.nonpositive.push_back({0, e->n, e->k});
  report.positive_ok = report.nonpositive.empty();

  for (int j = 1; j <= problem.m(); ++j) {
    const EdgePropagator edge(problem.potential(j));
    for (const auto* e : used)
      if (std::abs(edge.solve(e->lambda).s_end) <= vanishing_threshold(e->lambda))
        report.vanishing.push_back({j, e->n, e->k});
  }
  report.s_nonzero_ok = report.vanishing.empty();

  const auto omegas = problem.omegas();
  const auto z = char_poly_roots(omegas);
  for (int j = 1; j <= problem.m(); ++j)
    if (std::abs(z.front() - omegas[j - 1]) <= 1e-8 * (1.0 + std::abs(omegas[j - 1])))
      report.z1_coincident_edges.push_back(j);
  report.z1_separated_ok = report.z1_coincident_edges.empty();

  const BoundarySample at_zero = solve_edge(problem.potential(1), 0.0);
  report.s1_at_zero_ok = std::abs(at_zero.s_end) > vanishing_threshold(0.0) &&
                         std::abs(at_zero.s_prime_end) > vanishing_threshold(0.0);
  return report;
}

}  // namespace starinv
