#pragma once

#include "starinv/errors.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace starinv {

/// Brent's method on a bracket [a, b] with f(a), f(b) of opposite sign (or zero).
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb, double xtol = 0.0,
                  int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw SpectralError(ErrorKind::StepFailure, "brent_root: bracket has no sign change");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

/// Root of an increasing function: expands a bracket around `guess` with
/// initial half-width `width`, then polishes with Brent.
template <typename F>
double increasing_root(F&& f, double guess, double width, int max_expand = 60) {
  double lo = guess - width, hi = guess + width;
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < max_expand && flo > 0; ++i) {
    hi = lo;
    fhi = flo;
    width *= 2;
    lo -= width;
    flo = f(lo);
  }
  for (int i = 0; i < max_expand && fhi < 0; ++i) {
    lo = hi;
    flo = fhi;
    width *= 2;
    hi += width;
    fhi = f(hi);
  }
  if (flo > 0 || fhi < 0)
    throw SpectralError(ErrorKind::StepFailure, "increasing_root: failed to bracket root");
  return brent_root(f, lo, hi, flo, fhi);
}

}  // namespace starinv
