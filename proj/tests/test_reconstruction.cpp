#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/diffusion.hpp"
#include "core/errors.hpp"
#include "core/glmm.hpp"
#include "core/gof.hpp"
#include "core/ingest.hpp"
#include "core/reconstruction.hpp"
#include "support/oracles.hpp"

using rtb::DistributionSpec;
using rtb::Error;
using rtb::ErrorCode;
using rtb::Family;
using rtb::FittedGlmm;
using rtb::FixedStart;
using rtb::GammaSumStart;

namespace {

FittedGlmm hand_model(Family family, std::vector<double> beta, double tau2,
                      double phi, std::vector<double> error_variance) {
  FittedGlmm model;
  model.family = family;
  model.beta = std::move(beta);
  model.tau2 = tau2;
  model.dispersion = phi;
  model.error_variance = std::move(error_variance);
  model.converged = true;
  model.ci_available.assign(model.beta.size(), true);
  model.vcov = Eigen::MatrixXd::Zero(model.level_count() + 2, model.level_count() + 2);
  return model;
}

}  // namespace

TEST_CASE("ig reconstruction closed forms") {
  {
    const auto [a, drift] = rtb::reconstruct_ig(2.0, 8.0);
    CHECK(a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(drift == doctest::Approx(0.5).epsilon(1e-15));
  }
  {
    const auto [a, drift] = rtb::reconstruct_ig(1.0, 1.0);
    CHECK(a == 1.0);
    CHECK(drift == 1.0);
  }
  CHECK_THROWS_AS(rtb::reconstruct_ig(-1.0, 1.0), Error);
  CHECK_THROWS_AS(rtb::reconstruct_ig(1.0, 0.0), Error);
}

TEST_CASE("ig round trip is exact to machine precision") {
  const double mus[] = {0.31, 1.0, 2.7, 11.5};
  const double vars[] = {0.09, 0.8, 3.3, 40.0};
  for (double mu : mus) {
    for (double v : vars) {
      const auto [a, drift] = rtb::reconstruct_ig(mu, v);
      CHECK(a / drift == doctest::Approx(mu).epsilon(1e-14));
      CHECK(a / (drift * drift * drift) == doctest::Approx(v).epsilon(1e-14));
    }
  }
}

TEST_CASE("monotonicity: slower mean RT means smaller drift at fixed dispersion") {
  // At fixed dispersion phi the implied drift is (1/mu) sqrt(1/phi), so a
  // slower mean RT always reconstructs to slower information accumulation.
  const double phi = 0.8;
  double prev = std::numeric_limits<double>::infinity();
  for (double mu = 0.5; mu <= 3.0; mu += 0.25) {
    const auto [a, drift] = rtb::reconstruct_ig(mu, phi * mu * mu * mu);
    CHECK(drift < prev);
    CHECK(drift == doctest::Approx((1.0 / mu) * std::sqrt(1.0 / phi)).epsilon(1e-12));
    prev = drift;
  }
}

TEST_CASE("fit then reconstruct recovers the diffusion parameters") {
  const auto draws = rtb::sample(DistributionSpec::inverse_gaussian(2.0, 1.0), 100000, 8);
  const auto fitted = rtb::fit_marginal(draws, Family::inverse_gaussian);
  const auto m = rtb::moments(fitted);
  const auto [a, drift] = rtb::reconstruct_ig(m.mean, m.variance);
  CHECK(std::abs(a - 1.0) < 0.05);
  CHECK(std::abs(drift - 0.5) < 0.02);
}

TEST_CASE("gamma reconstruction closed forms") {
  const auto spec = rtb::reconstruct_gamma(2.0, 2.0);
  const auto& start = std::get<GammaSumStart>(spec.start);
  CHECK(start.shape == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(start.scale == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(spec.drift == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(spec.delta == 0.01);

  const auto fig2 = rtb::reconstruct_gamma(3.5, 3.5);
  const auto& s2 = std::get<GammaSumStart>(fig2.start);
  CHECK(s2.shape == doctest::Approx(3.5).epsilon(1e-15));
  // scale parameter beta = sigma2/mu = 1 -> per-component scale sqrt(1/2)
  CHECK(s2.scale == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(rtb::reconstruct_gamma(0.0, 1.0), Error);
}

TEST_CASE("gamma reconstruction round trip by simulation") {
  auto spec = rtb::reconstruct_gamma(2.0, 2.0, 0.001);
  const auto s = rtb::simulate_fht(spec, 10000, 15);
  const double n = static_cast<double>(s.times.size());
  CHECK(std::abs(oracle::mean(s.times) - 2.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("glmm_to_diffusion composes the marginal formulas") {
  // IG model with beta=0, tau2=0, sigma2=1 (phi=1): mu=1, sigma2=1 -> a=1, nu=1.
  const auto ig_model = hand_model(Family::inverse_gaussian, {0.0}, 0.0, 1.0, {1.0});
  const auto rec = rtb::glmm_to_diffusion(ig_model, 1);
  CHECK(std::get<FixedStart>(rec.diffusion.start).position ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rec.diffusion.drift == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rec.family == Family::inverse_gaussian);
  const auto m = rtb::moments(rec.implied_marginal);
  CHECK(m.mean == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(1.0).epsilon(1e-14));

  // Gamma model with beta=ln 2, tau2=0, sigma2=2: mu=2, sigma2=2 -> shape 2, scale 1.
  const auto g_model = hand_model(Family::gamma, {std::log(2.0)}, 0.0, 0.5, {2.0});
  const auto grec = rtb::glmm_to_diffusion(g_model, 1);
  const auto& start = std::get<GammaSumStart>(grec.diffusion.start);
  CHECK(start.shape == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(start.scale == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("glmm_to_diffusion refuses non-converged models") {
  auto model = hand_model(Family::gamma, {0.0}, 0.0, 1.0, {1.0});
  model.converged = false;
  try {
    rtb::glmm_to_diffusion(model, 1);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_converged);
  }
  auto ok = hand_model(Family::gamma, {0.0}, 0.0, 1.0, {1.0});
  CHECK_THROWS_AS(rtb::glmm_to_diffusion(ok, 2), Error);
}

TEST_CASE("end-to-end: synthesize, fit, reconstruct, simulate, test fit") {
  rtb::SynthesisTruth truth;
  truth.beta = {std::log(0.8), std::log(1.2), std::log(1.6)};
  truth.tau2 = 0.15;
  truth.family = Family::gamma;
  truth.dispersion = 0.5;
  const auto ds = rtb::synthesize({3, 60, 8}, truth, 20260811);
  const auto model = rtb::fit(ds, Family::gamma);
  REQUIRE(model.converged);
  const auto rec = rtb::glmm_to_diffusion(model, 2, 0.001);
  const auto fht = rtb::simulate_fht(rec.diffusion, 500, 4, 2);
  const auto [stat, p] = rtb::ks_test(fht.times, rec.implied_marginal);
  CHECK(p > 0.01);
}

TEST_CASE("reconstruction JSON lists the diffusion fields") {
  auto model = hand_model(Family::gamma, {std::log(2.0)}, 0.0, 0.5, {2.0});
  model.response_label = "happy";
  const auto rec = rtb::glmm_to_diffusion(model, 1, 0.01);
  const std::string json = rtb::reconstruction_to_json(rec);
  for (const char* needle :
       {"\"level\"", "\"response\"", "\"happy\"", "\"family\"", "\"gamma\"",
        "\"start\"", "\"gamma_sum\"", "\"drift\"", "\"delta\"", "\"implied_marginal\""}) {
    CAPTURE(needle);
    CHECK(json.find(needle) != std::string::npos);
  }
}
