#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "core/diffusion.hpp"
#include "core/distributions.hpp"
#include "core/glmm.hpp"

namespace rtb {

// A fitted level's diffusion reconstruction together with the marginal RT
// law the diffusion's hitting time should follow.
struct CognitiveReconstruction {
  int level_id = 1;  // 1-based
  std::string response_label;
  Family family = Family::inverse_gaussian;
  DiffusionSpec diffusion;
  DistributionSpec implied_marginal =
      DistributionSpec::inverse_gaussian(1.0, 1.0);
};

// Closed-form IG inversion: drift = sqrt(mu/sigma2), a = mu * drift. The
// round trip a/drift = mu and a/drift^3 = sigma2 is exact.
std::pair<double, double> reconstruct_ig(double mu_hat, double sigma2_hat);

DiffusionSpec reconstruct_ig_diffusion(double mu_hat, double sigma2_hat,
                                       double delta = 0.01);

// Gamma inversion: shape = mu^2/sigma2, scale = sigma2/mu; the diffusion has
// a Gamma-sum start with per-component scale sqrt(scale/2) and drift
// 1/sqrt(scale/2). Hitting-time mean/variance match shape*scale and
// shape*scale^2 analytically.
DiffusionSpec reconstruct_gamma(double mu_hat, double sigma2_hat,
                                double delta = 0.01);

// Marginal moments of the fitted level -> family-specific diffusion.
CognitiveReconstruction glmm_to_diffusion(const FittedGlmm& model, int level,
                                          double delta = 0.01);

std::string reconstruction_to_json(const CognitiveReconstruction& rec);
void write_json(const CognitiveReconstruction& rec, const std::filesystem::path& path);

}  // namespace rtb
