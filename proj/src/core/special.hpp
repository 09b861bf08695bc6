#pragma once

namespace rtb::special {

double norm_cdf(double z);
double log_norm_cdf(double z);
double norm_quantile(double p);

double digamma(double x);
double trigamma(double x);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Survival function of the Kolmogorov distribution, Q(t) = P(K > t).
double kolmogorov_sf(double t);

// Critical value c with Q(c) = alpha; the one-sample KS test at level alpha
// rejects when sqrt(n) * D > c.
double kolmogorov_critical(double alpha);

}  // namespace rtb::special
