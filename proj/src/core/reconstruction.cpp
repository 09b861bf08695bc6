#include "core/reconstruction.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace rtb {

namespace {

void check_moments(double mu, double sigma2) {
  require(std::isfinite(mu) && mu > 0.0, ErrorCode::domain,
          "reconstruction requires mu > 0");
  require(std::isfinite(sigma2) && sigma2 > 0.0, ErrorCode::domain,
          "reconstruction requires sigma2 > 0");
}

}  // namespace

std::pair<double, double> reconstruct_ig(double mu_hat, double sigma2_hat) {
  check_moments(mu_hat, sigma2_hat);
  const double drift = std::sqrt(mu_hat / sigma2_hat);
  return {mu_hat * drift, drift};
}

DiffusionSpec reconstruct_ig_diffusion(double mu_hat, double sigma2_hat,
                                       double delta) {
  const auto [a, drift] = reconstruct_ig(mu_hat, sigma2_hat);
  DiffusionSpec spec;
  spec.start = FixedStart{a};
  spec.drift = drift;
  spec.delta = delta;
  validate(spec);
  return spec;
}

DiffusionSpec reconstruct_gamma(double mu_hat, double sigma2_hat, double delta) {
  check_moments(mu_hat, sigma2_hat);
  const double shape = mu_hat * mu_hat / sigma2_hat;
  const double scale = sigma2_hat / mu_hat;
  const double start_scale = std::sqrt(scale / 2.0);
  DiffusionSpec spec;
  spec.start = GammaSumStart{shape, start_scale};
  spec.drift = 1.0 / start_scale;
  spec.delta = delta;
  validate(spec);
  return spec;
}

CognitiveReconstruction glmm_to_diffusion(const FittedGlmm& model, int level,
                                          double delta) {
  require(model.converged, ErrorCode::not_converged,
          "reconstruction refused: the model did not converge");
  require(level >= 1 && level <= model.level_count(), ErrorCode::domain,
          "level out of range");
  const double mu = marginal_mean(model, level);
  const double sigma2 = marginal_variance(model, level);
  CognitiveReconstruction rec;
  rec.level_id = level;
  rec.response_label = model.response_label;
  rec.family = model.family;
  rec.diffusion = model.family == Family::inverse_gaussian
                      ? reconstruct_ig_diffusion(mu, sigma2, delta)
                      : reconstruct_gamma(mu, sigma2, delta);
  rec.implied_marginal = DistributionSpec::from_moments(model.family, mu, sigma2);
  return rec;
}

std::string reconstruction_to_json(const CognitiveReconstruction& rec) {
  nlohmann::json j;
  j["level"] = rec.level_id;
  j["response"] = rec.response_label;
  j["family"] = family_name(rec.family);
  if (const auto* fixed = std::get_if<FixedStart>(&rec.diffusion.start)) {
    j["start"] = {{"kind", "fixed"}, {"position", fixed->position}};
  } else {
    const auto& gs = std::get<GammaSumStart>(rec.diffusion.start);
    j["start"] = {{"kind", "gamma_sum"}, {"shape", gs.shape}, {"scale", gs.scale}};
  }
  j["drift"] = rec.diffusion.drift;
  j["delta"] = rec.diffusion.delta;
  const Moments m = moments(rec.implied_marginal);
  nlohmann::json marg;
  marg["family"] = family_name(rec.implied_marginal.family());
  if (rec.implied_marginal.family() == Family::inverse_gaussian) {
    marg["mu"] = rec.implied_marginal.ig().mu;
    marg["phi"] = rec.implied_marginal.ig().phi;
  } else {
    marg["shape"] = rec.implied_marginal.gamma_params().shape;
    marg["scale"] = rec.implied_marginal.gamma_params().scale;
  }
  marg["mean"] = m.mean;
  marg["variance"] = m.variance;
  j["implied_marginal"] = std::move(marg);
  return j.dump(2) + "\n";
}

void write_json(const CognitiveReconstruction& rec, const std::filesystem::path& path) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io, "cannot write " + path.string());
  os << reconstruction_to_json(rec);
  os.flush();
  require(os.good(), ErrorCode::io, "write failed for " + path.string());
}

}  // namespace rtb
