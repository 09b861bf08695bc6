#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "core/errors.hpp"

namespace rtb {

// Brent's method on a bracketing interval [lo, hi] with f(lo) and f(hi) of
// opposite sign. Stops when the bracket is narrower than
// xtol_rel * max(1, |x|).
inline double find_root(const std::function<double(double)>& f, double lo, double hi,
                        double xtol_rel = 1e-12, int max_iter = 200) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  require(std::isfinite(fa) && std::isfinite(fb), ErrorCode::evaluation,
          "find_root: non-finite function value at bracket");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  require(std::signbit(fa) != std::signbit(fb), ErrorCode::evaluation,
          "find_root: bracket does not straddle a root");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = xtol_rel * std::max(1.0, std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m;
      e = m;
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = b - a;
      d = e;
    }
  }
  return b;
}

}  // namespace rtb
