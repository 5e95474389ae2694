#include "starinv/weyl.hpp"

#include "starinv/errors.hpp"

#include <cmath>

namespace starinv {

WeylValue weyl_from_sample(const BoundarySample& s, double lambda) {
  if (std::abs(s.s_end) <= vanishing_threshold(lambda)) return WeylValue::make_pole();
  return {-s.s_prime_end / s.s_end, false};
}

WeylValue weyl_function(const GridFunction& q, double lambda) {
  return weyl_from_sample(solve_edge(q, lambda), lambda);
}

double GTable::at(int n, int k) const {
  auto it = values_.find({n, k});
  if (it == values_.end())
    throw SpectralError(ErrorKind::MissingEigenvalue,
                        "missing g_" + std::to_string(n) + "," + std::to_string(k));
  return it->second;
}

bool GTable::is_infinite(int n, int k) const { return std::isinf(at(n, k)); }

int GTable::infinite_count() const {
  int count = 0;
  for (const auto& [label, g] : values_)
    if (std::isinf(g)) ++count;
  return count;
}

GTable aggregate_g(const std::vector<GridFunction>& known, const SpectrumTable& table) {
  std::vector<EdgePropagator> edges;
  for (const auto& q : known) edges.emplace_back(q);

  GTable out;
  int exceptional = 0;
  for (const auto& e : table.entries) {
    if (e.k != 1 && e.k != 2) continue;
    double g = 0.0;
    int vanishing = 0, first_edge = 0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      const WeylValue w = weyl_from_sample(edges[j].solve(e.lambda), e.lambda);
      if (w.pole) {
        if (vanishing++ == 0) first_edge = int(j) + 2;
      } else {
        g -= w.value;
      }
    }
    if (vanishing >= 2) throw AssumptionThreeViolation(first_edge, e.n, e.k);
    if (vanishing == 1) {
      out.set_infinite(e.n, e.k);
      if (e.k == 1 && ++exceptional > kMaxExceptionalRows)
        throw SpectralError(ErrorKind::TooManyExceptional,
                            "more than " + std::to_string(kMaxExceptionalRows) +
                                " k = 1 eigenvalues coincide with Dirichlet eigenvalues of known "
                                "edges; the data cannot come from one star graph");
    } else {
      out.set(e.n, e.k, g);
    }
  }
  return out;
}

}  // namespace starinv
