#include "core/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/errors.hpp"
#include "core/rootfind.hpp"
#include "core/special.hpp"

namespace rtb {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

void check_positive(double v, const char* what) {
  require(std::isfinite(v) && v > 0.0, ErrorCode::parameter_domain,
          std::string(what) + " must be positive and finite");
}

double ig_log_pdf(double y, double mu, double phi) {
  const double lambda = 1.0 / phi;
  const double dev = y - mu;
  return 0.5 * (std::log(lambda) - kLog2Pi - 3.0 * std::log(y)) -
         lambda * dev * dev / (2.0 * mu * mu * y);
}

double ig_cdf(double y, double mu, double phi) {
  if (y <= 0.0) return 0.0;
  const double lambda = 1.0 / phi;
  const double r = std::sqrt(lambda / y);
  const double first = special::norm_cdf(r * (y / mu - 1.0));
  // exp(2*lambda/mu) * Phi(-r (y/mu + 1)) computed in logs; the plain product
  // overflows for small dispersion.
  const double second =
      std::exp(2.0 * lambda / mu + special::log_norm_cdf(-r * (y / mu + 1.0)));
  return std::min(1.0, first + second);
}

double gamma_log_pdf(double y, double shape, double scale) {
  if (y == 0.0) {
    if (shape > 1.0) return -std::numeric_limits<double>::infinity();
    if (shape == 1.0) return -std::log(scale);
    throw Error(ErrorCode::domain, "gamma pdf at y=0 requires shape >= 1");
  }
  return (shape - 1.0) * std::log(y) - y / scale - shape * std::log(scale) -
         std::lgamma(shape);
}

// Michael/Schucany/Haas exact IG sampler: chi-square transform plus a
// uniform branch choosing between the two roots.
double sample_ig(double mu, double lambda, Rng& rng) {
  const double z = rng.normal();
  const double v = z * z;
  const double x = mu + 0.5 * mu * mu * v / lambda -
                   0.5 * (mu / lambda) * std::sqrt(4.0 * mu * lambda * v + mu * mu * v * v);
  const double u = rng.uniform();
  return u <= mu / (mu + x) ? x : mu * mu / x;
}

double sample_mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double gamma_shape_mle(std::span<const double> values) {
  const double mean = sample_mean(values);
  double mean_log = 0.0;
  for (double y : values) mean_log += std::log(y);
  mean_log /= static_cast<double>(values.size());
  const double s = std::log(mean) - mean_log;  // > 0 unless degenerate
  require(s > 0.0 && std::isfinite(s), ErrorCode::degenerate_sample,
          "gamma fit: zero spread between arithmetic and geometric mean");
  double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int i = 0; i < 100; ++i) {
    const double step = (std::log(a) - special::digamma(a) - s) /
                        (1.0 / a - special::trigamma(a));
    a -= step;
    if (std::abs(step) <= 1e-13 * a) break;
  }
  require(std::isfinite(a) && a > 0.0, ErrorCode::evaluation,
          "gamma fit: shape iteration diverged");
  return a;
}

}  // namespace

std::string family_name(Family family) {
  return family == Family::inverse_gaussian ? "inverse_gaussian" : "gamma";
}

Family family_from_name(const std::string& name) {
  if (name == "inverse_gaussian" || name == "ig") return Family::inverse_gaussian;
  if (name == "gamma") return Family::gamma;
  throw Error(ErrorCode::schema, "unknown family name: " + name);
}

DistributionSpec DistributionSpec::inverse_gaussian(double mu, double phi) {
  check_positive(mu, "IG mu");
  check_positive(phi, "IG phi");
  return DistributionSpec(Family::inverse_gaussian, IgParams{mu, phi});
}

DistributionSpec DistributionSpec::gamma(double shape, double scale) {
  check_positive(shape, "gamma shape");
  check_positive(scale, "gamma scale");
  return DistributionSpec(Family::gamma, GammaParams{shape, scale});
}

DistributionSpec DistributionSpec::from_moments(Family family, double mean,
                                                double variance) {
  check_positive(mean, "mean");
  check_positive(variance, "variance");
  if (family == Family::inverse_gaussian) {
    return inverse_gaussian(mean, variance / (mean * mean * mean));
  }
  return gamma(mean * mean / variance, variance / mean);
}

const IgParams& DistributionSpec::ig() const {
  require(family_ == Family::inverse_gaussian, ErrorCode::domain,
          "spec does not hold IG parameters");
  return std::get<IgParams>(params_);
}

const GammaParams& DistributionSpec::gamma_params() const {
  require(family_ == Family::gamma, ErrorCode::domain,
          "spec does not hold gamma parameters");
  return std::get<GammaParams>(params_);
}

double log_pdf(const DistributionSpec& spec, double y) {
  require(std::isfinite(y) && y >= 0.0, ErrorCode::domain, "pdf requires y >= 0");
  if (spec.family() == Family::inverse_gaussian) {
    if (y == 0.0) return -std::numeric_limits<double>::infinity();
    return ig_log_pdf(y, spec.ig().mu, spec.ig().phi);
  }
  return gamma_log_pdf(y, spec.gamma_params().shape, spec.gamma_params().scale);
}

double pdf(const DistributionSpec& spec, double y) { return std::exp(log_pdf(spec, y)); }

double cdf(const DistributionSpec& spec, double y) {
  require(std::isfinite(y), ErrorCode::domain, "cdf requires finite y");
  if (y <= 0.0) return 0.0;
  if (spec.family() == Family::inverse_gaussian) {
    return ig_cdf(y, spec.ig().mu, spec.ig().phi);
  }
  return special::gamma_p(spec.gamma_params().shape, y / spec.gamma_params().scale);
}

double quantile(const DistributionSpec& spec, double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::domain, "quantile requires p in (0,1)");
  double hi = moments(spec).mean;
  double lo = hi;
  int guard = 0;
  while (cdf(spec, hi) < p) {
    hi *= 2.0;
    require(++guard < 2000, ErrorCode::evaluation, "quantile: upper bracket failed");
  }
  guard = 0;
  while (cdf(spec, lo) > p) {
    lo *= 0.5;
    require(++guard < 2000, ErrorCode::evaluation, "quantile: lower bracket failed");
  }
  return find_root([&](double y) { return cdf(spec, y) - p; }, lo, hi, 1e-12);
}

Moments moments(const DistributionSpec& spec) {
  if (spec.family() == Family::inverse_gaussian) {
    const auto& p = spec.ig();
    return {p.mu, p.phi * p.mu * p.mu * p.mu};
  }
  const auto& p = spec.gamma_params();
  return {p.shape * p.scale, p.shape * p.scale * p.scale};
}

double sample_one(const DistributionSpec& spec, Rng& rng) {
  if (spec.family() == Family::inverse_gaussian) {
    return sample_ig(spec.ig().mu, 1.0 / spec.ig().phi, rng);
  }
  return rng.gamma(spec.gamma_params().shape, spec.gamma_params().scale);
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n,
                           std::uint64_t seed) {
  require(n >= 1, ErrorCode::empty_sample, "sample requires n >= 1");
  Rng rng(mix64(seed));
  std::vector<double> out(n);
  for (double& v : out) v = sample_one(spec, rng);
  return out;
}

DistributionSpec fit_marginal(std::span<const double> values, Family family) {
  require(values.size() >= 2, ErrorCode::domain, "fit_marginal requires at least 2 values");
  for (double y : values) {
    require(std::isfinite(y) && y > 0.0, ErrorCode::domain,
            "fit_marginal requires strictly positive values");
  }
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double y : values) ss += (y - mean) * (y - mean);
  const double variance = ss / static_cast<double>(values.size());
  require(variance >= 1e-12 * mean * mean, ErrorCode::degenerate_sample,
          "fit_marginal: dispersion underflow (sample is numerically constant)");

  if (family == Family::inverse_gaussian) {
    double phi = 0.0;
    for (double y : values) phi += 1.0 / y - 1.0 / mean;
    phi /= static_cast<double>(values.size());
    require(phi > 0.0 && std::isfinite(phi), ErrorCode::degenerate_sample,
            "fit_marginal: nonpositive IG dispersion estimate");
    return DistributionSpec::inverse_gaussian(mean, phi);
  }
  const double shape = gamma_shape_mle(values);
  return DistributionSpec::gamma(shape, mean / shape);
}

}  // namespace rtb
