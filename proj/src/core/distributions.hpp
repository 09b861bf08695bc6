#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace rtb {

enum class Family { inverse_gaussian, gamma };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

// Inverse Gaussian in mean/dispersion form: variance = phi * mu^3.
struct IgParams {
  double mu;
  double phi;
};

// Gamma in shape/scale form: mean = shape*scale, variance = shape*scale^2,
// so the GLM dispersion is 1/shape.
struct GammaParams {
  double shape;
  double scale;
};

struct Moments {
  double mean;
  double variance;
};

class DistributionSpec {
 public:
  static DistributionSpec inverse_gaussian(double mu, double phi);
  static DistributionSpec gamma(double shape, double scale);
  // Spec with the given family whose first two moments match exactly.
  static DistributionSpec from_moments(Family family, double mean, double variance);

  Family family() const { return family_; }
  const IgParams& ig() const;
  const GammaParams& gamma_params() const;

 private:
  DistributionSpec(Family family, IgParams p) : family_(family), params_(p) {}
  DistributionSpec(Family family, GammaParams p) : family_(family), params_(p) {}

  Family family_;
  std::variant<IgParams, GammaParams> params_;
};

double log_pdf(const DistributionSpec& spec, double y);
double pdf(const DistributionSpec& spec, double y);
double cdf(const DistributionSpec& spec, double y);
double quantile(const DistributionSpec& spec, double p);
Moments moments(const DistributionSpec& spec);

double sample_one(const DistributionSpec& spec, Rng& rng);
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

// Maximum-likelihood marginal fit of a single IG or Gamma distribution.
DistributionSpec fit_marginal(std::span<const double> values, Family family);

}  // namespace rtb
