#pragma once

// Entire-in-mu forms of cos(sqrt(mu) t) and sin(sqrt(mu) t)/sqrt(mu).
// For mu < 0 they continue to cosh and sinh; near mu*t^2 = 0 a short
// Taylor series replaces the closed forms.

#include <cmath>

namespace starinv {

inline constexpr double kSeriesThreshold = 1e-4;

/// cos(sqrt(mu) t), continued to cosh(sqrt(-mu) t) for mu < 0.
template <typename Scalar>
Scalar cos_entire(Scalar mu, Scalar t) {
  using std::abs, std::cos, std::cosh, std::sqrt;
  const Scalar z = mu * t * t;
  if (abs(z) < Scalar(kSeriesThreshold))
    return Scalar(1) - z / 2 + z * z / 24 - z * z * z / 720 + z * z * z * z / 40320;
  if (mu > 0) return cos(sqrt(mu) * t);
  return cosh(sqrt(-mu) * t);
}

/// sin(sqrt(mu) t)/sqrt(mu), continued to sinh(sqrt(-mu) t)/sqrt(-mu) for mu < 0.
template <typename Scalar>
Scalar sinc_entire(Scalar mu, Scalar t) {
  using std::abs, std::sin, std::sinh, std::sqrt;
  const Scalar z = mu * t * t;
  if (abs(z) < Scalar(kSeriesThreshold))
    return t * (Scalar(1) - z / 6 + z * z / 120 - z * z * z / 5040 + z * z * z * z / 362880);
  if (mu > 0) {
    const Scalar r = sqrt(mu);
    return sin(r * t) / r;
  }
  const Scalar r = sqrt(-mu);
  return sinh(r * t) / r;
}

/// (cos(sqrt(mu) t) - cos(sqrt(mu) T)) / mu, written without cancellation.
template <typename Scalar>
Scalar cos_difference_over_mu(Scalar mu, Scalar t, Scalar T) {
  using std::abs, std::sin, std::sinh, std::sqrt;
  const Scalar reach = abs(t) > abs(T) ? abs(t) : abs(T);
  if (abs(mu) * reach * reach < Scalar(kSeriesThreshold)) {
    // sum_{k>=1} (-1)^k mu^(k-1) (t^2k - T^2k) / (2k)!
    const Scalar t2 = t * t, T2 = T * T;
    Scalar tp = t2, Tp = T2, mp = 1, fact = 2, sum = 0, sign = -1;
    for (int k = 1; k <= 5; ++k) {
      sum += sign * mp * (tp - Tp) / fact;
      tp *= t2;
      Tp *= T2;
      mp *= mu;
      fact *= Scalar(2 * k + 1) * Scalar(2 * k + 2);
      sign = -sign;
    }
    return sum;
  }
  if (mu > 0) {
    const Scalar r = sqrt(mu);
    return Scalar(-2) * sin(r * (t + T) / 2) * sin(r * (t - T) / 2) / mu;
  }
  const Scalar r = sqrt(-mu);
  return Scalar(2) * sinh(r * (t + T) / 2) * sinh(r * (t - T) / 2) / mu;
}

}  // namespace starinv
