#include "core/special.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "core/errors.hpp"

namespace rtb::special {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;
}  // namespace

double norm_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double log_norm_cdf(double z) {
  if (z > -37.0) {
    return std::log(norm_cdf(z));
  }
  // Asymptotic expansion of Mills' ratio for the far left tail, where erfc
  // underflows.
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - kLogSqrt2Pi - std::log(-z) + std::log(series);
}

double norm_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::domain, "normal quantile requires p in (0,1)");
  static const boost::math::normal_distribution<double> standard_normal;
  return boost::math::quantile(standard_normal, p);
}

double digamma(double x) { return boost::math::digamma(x); }

double trigamma(double x) { return boost::math::trigamma(x); }

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double kolmogorov_sf(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.0) {
    // Dual theta-series; converges fast for small t where the alternating
    // series does not.
    const double f = std::sqrt(2.0 * M_PI) / t;
    double sum = 0.0;
    for (int k = 1; k <= 21; k += 2) {
      const double term = std::exp(-k * k * M_PI * M_PI / (8.0 * t * t));
      sum += term;
      if (term < 1e-16 * sum) break;
    }
    return 1.0 - f * sum;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return 2.0 * sum;
}

double kolmogorov_critical(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::domain,
          "kolmogorov_critical requires alpha in (0,1)");
  double lo = 0.2;
  double hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_sf(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rtb::special
