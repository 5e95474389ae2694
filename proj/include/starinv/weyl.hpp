#pragma once

#include "starinv/graph_forward.hpp"
#include "starinv/sl_core.hpp"

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace starinv {

/// M(lambda) = -S'(pi, lambda) / S(pi, lambda), or a pole marker.
struct WeylValue {
  double value = 0.0;
  bool pole = false;

  static WeylValue make_pole() { return {std::numeric_limits<double>::infinity(), true}; }
};

WeylValue weyl_from_sample(const BoundarySample& s, double lambda);
WeylValue weyl_function(const GridFunction& q, double lambda);

/// Values g_nk = M_1(lambda_nk) for k in {1, 2}. An infinite entry marks
/// S_1(pi, lambda_nk) = 0.
class GTable {
 public:
  void set(int n, int k, double g) { values_[{n, k}] = g; }
  void set_infinite(int n, int k) { values_[{n, k}] = std::numeric_limits<double>::infinity(); }
  bool contains(int n, int k) const { return values_.count({n, k}) != 0; }
  /// Throws MissingEigenvalue when absent.
  double at(int n, int k) const;
  bool is_infinite(int n, int k) const;
  int infinite_count() const;
  const std::map<std::pair<int, int>, double>& values() const { return values_; }

 private:
  std::map<std::pair<int, int>, double> values_;
};

/// At most this many k = 1 entries may be infinite.
inline constexpr int kMaxExceptionalRows = 5;

/// g_nk = -sum_{j>=2} M_j(lambda_nk) over the k = 1, 2 entries of `table`.
/// `known` holds q_2..q_m. An eigenvalue where exactly one known edge has a
/// Dirichlet eigenvalue forces S_1(pi, lambda) = 0 and gives an infinite
/// entry; two or more vanishing edges throw AssumptionThreeViolation.
GTable aggregate_g(const std::vector<GridFunction>& known, const SpectrumTable& table);

}  // namespace starinv
