#pragma once

// Independent numerical oracles used by the test suites. These deliberately
// avoid the library's own code paths: densities are re-derived from the
// formulas, integrals use adaptive Simpson, quantile checks use bisection,
// and the mixed-model likelihood oracle integrates over a dense grid instead
// of Gauss-Hermite nodes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x,
                         double h = 1e-4) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) /
         (12.0 * h);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < tol * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

// Densities re-derived from first principles.
inline double ig_logpdf(double y, double mu, double phi) {
  const double lambda = 1.0 / phi;
  return 0.5 * std::log(lambda / (2.0 * M_PI * y * y * y)) -
         lambda * (y - mu) * (y - mu) / (2.0 * mu * mu * y);
}

inline double gamma_logpdf(double y, double shape, double scale) {
  return (shape - 1.0) * std::log(y) - y / scale - shape * std::log(scale) -
         std::lgamma(shape);
}

// One-sample KS statistic from already-computed CDF values of the sorted
// sample.
inline double ks_stat(std::vector<double> cdf_sorted) {
  const double n = static_cast<double>(cdf_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_sorted.size(); ++i) {
    d = std::max({d, (i + 1.0) / n - cdf_sorted[i], cdf_sorted[i] - i / n});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

// Marginal GLMM log-likelihood by brute force: for each subject,
// log Integral exp(sum_t log f(y_t | exp(beta + c))) N(c;0,tau2) dc
// via the trapezoid rule on [-8 tau, 8 tau], in log space. Trials are given
// flat: level[t] (0-based), subject[t] (0-based), y[t].
inline double glmm_loglik_dense(const std::vector<int>& subject,
                                const std::vector<int>& level,
                                const std::vector<double>& y,
                                const std::vector<double>& beta, double tau2,
                                double phi, bool gamma_family, int points = 100001) {
  const int m = 1 + *std::max_element(subject.begin(), subject.end());
  const double tau = std::sqrt(tau2);
  const double lo = -8.0 * tau;
  const double hi = 8.0 * tau;
  const double dc = (hi - lo) / (points - 1);
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> logvals(static_cast<std::size_t>(points));
    for (int p = 0; p < points; ++p) {
      const double c = lo + p * dc;
      double lp = -0.5 * std::log(2.0 * M_PI * tau2) - c * c / (2.0 * tau2);
      for (std::size_t t = 0; t < y.size(); ++t) {
        if (subject[t] != k) continue;
        const double mu = std::exp(beta[static_cast<std::size_t>(level[t])] + c);
        lp += gamma_family ? gamma_logpdf(y[t], 1.0 / phi, phi * mu)
                           : ig_logpdf(y[t], mu, phi);
      }
      logvals[static_cast<std::size_t>(p)] = lp;
      best = std::max(best, lp);
    }
    double acc = 0.0;
    for (int p = 0; p < points; ++p) {
      const double w = (p == 0 || p == points - 1) ? 0.5 : 1.0;
      acc += w * std::exp(logvals[static_cast<std::size_t>(p)] - best);
    }
    total += best + std::log(acc * dc);
  }
  return total;
}

}  // namespace oracle
