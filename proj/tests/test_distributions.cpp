#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/distributions.hpp"
#include "core/errors.hpp"
#include "support/oracles.hpp"

using rtb::DistributionSpec;
using rtb::Error;
using rtb::ErrorCode;
using rtb::Family;

namespace {

const std::vector<DistributionSpec> kGrid = {
    DistributionSpec::inverse_gaussian(1.0, 1.0),
    DistributionSpec::inverse_gaussian(2.0, 0.5),
    DistributionSpec::inverse_gaussian(0.5, 2.0),
    DistributionSpec::gamma(0.8, 1.5),
    DistributionSpec::gamma(2.0, 1.0),
    DistributionSpec::gamma(3.5, 1.0),
};

}  // namespace

TEST_CASE("pdf closed-form points") {
  // IG density at y = mu: the exponent vanishes, leaving sqrt(lambda/(2 pi y^3)).
  CHECK(rtb::pdf(DistributionSpec::inverse_gaussian(1.0, 1.0), 1.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(rtb::pdf(DistributionSpec::inverse_gaussian(2.0, 1.0), 2.0) ==
        doctest::Approx(0.14104739588693907).epsilon(1e-12));
  // Exponential density at the origin.
  CHECK(rtb::pdf(DistributionSpec::gamma(1.0, 1.0), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("pdf against finite differences of the cdf") {
  const auto spec = DistributionSpec::inverse_gaussian(2.0, 1.0);
  const double fd = oracle::derivative([&](double y) { return rtb::cdf(spec, y); }, 2.0);
  CHECK(rtb::pdf(spec, 2.0) == doctest::Approx(fd).epsilon(1e-8));
  for (const auto& grid_spec : kGrid) {
    const double y = rtb::moments(grid_spec).mean;
    const double d =
        oracle::derivative([&](double v) { return rtb::cdf(grid_spec, v); }, y);
    CHECK(rtb::pdf(grid_spec, y) == doctest::Approx(d).epsilon(1e-7));
  }
}

TEST_CASE("pdf domain errors") {
  CHECK_THROWS_AS(rtb::pdf(DistributionSpec::inverse_gaussian(1.0, 1.0), -0.1), Error);
  CHECK_THROWS_AS(rtb::pdf(DistributionSpec::gamma(0.5, 1.0), 0.0), Error);
  CHECK_THROWS_AS(DistributionSpec::inverse_gaussian(-1.0, 1.0), Error);
  CHECK_THROWS_AS(DistributionSpec::inverse_gaussian(1.0, 0.0), Error);
  CHECK_THROWS_AS(DistributionSpec::gamma(0.0, 1.0), Error);
  try {
    DistributionSpec::gamma(1.0, -2.0);
    FAIL("expected a parameter-domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parameter_domain);
  }
}

TEST_CASE("cdf basics and quadrature oracle") {
  CHECK(rtb::cdf(DistributionSpec::inverse_gaussian(1.0, 1.0), 0.0) == 0.0);
  CHECK(rtb::cdf(DistributionSpec::gamma(2.0, 1.0), -1.0) == 0.0);
  CHECK(rtb::cdf(DistributionSpec::gamma(1.0, 1.0), std::log(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const auto spec = DistributionSpec::inverse_gaussian(2.0, 1.0);
  const double integral =
      oracle::integrate([&](double y) { return rtb::pdf(spec, y); }, 0.0, 2.0);
  CHECK(rtb::cdf(spec, 2.0) == doctest::Approx(integral).epsilon(1e-8));
  // Frozen from the quadrature oracle above.
  CHECK(rtb::cdf(spec, 2.0) == doctest::Approx(0.71379178807790666).epsilon(1e-10));
}

TEST_CASE("cdf equals integral of pdf across the grid") {
  for (const auto& spec : kGrid) {
    const auto m = rtb::moments(spec);
    const double lo = 1e-9;
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double y = m.mean * 0.04 * i;  // up to 4x the mean
      const double c = rtb::cdf(spec, y);
      CHECK(c >= prev);  // nondecreasing
      prev = c;
      if (i % 20 == 0) {
        const double integral =
            oracle::integrate([&](double v) { return rtb::pdf(spec, v); }, lo, y);
        CHECK(c == doctest::Approx(integral).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("pdf integrates to one") {
  for (const auto& spec : kGrid) {
    const auto m = rtb::moments(spec);
    const double hi = m.mean + 40.0 * std::sqrt(m.variance);
    const double integral =
        oracle::integrate([&](double v) { return rtb::pdf(spec, v); }, 1e-9, hi, 1e-10);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("quantile closed forms and roundtrips") {
  CHECK(rtb::quantile(DistributionSpec::gamma(1.0, 1.0), 0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-10));
  for (const auto& spec : kGrid) {
    for (double p : {0.01, 0.5, 0.99}) {
      const double q = rtb::quantile(spec, p);
      CHECK(rtb::cdf(spec, q) == doctest::Approx(p).epsilon(1e-8));
    }
  }
  // Bisection oracle for IG(1,1) at p = 0.9.
  const auto spec = DistributionSpec::inverse_gaussian(1.0, 1.0);
  const double root =
      oracle::bisect([&](double y) { return rtb::cdf(spec, y) - 0.9; }, 1e-6, 50.0);
  CHECK(rtb::quantile(spec, 0.9) == doctest::Approx(root).epsilon(1e-9));
  CHECK_THROWS_AS(rtb::quantile(spec, 0.0), Error);
  CHECK_THROWS_AS(rtb::quantile(spec, 1.0), Error);
}

TEST_CASE("sampling moments and determinism") {
  const std::size_t n = 100000;
  {
    const auto spec = DistributionSpec::inverse_gaussian(2.0, 1.0);
    const auto draws = rtb::sample(spec, n, 91);
    for (double v : draws) CHECK(v > 0.0);
    CHECK(oracle::mean(draws) ==
          doctest::Approx(2.0).epsilon(3.0 * std::sqrt(8.0 / n) / 2.0));
  }
  {
    const auto spec = DistributionSpec::gamma(2.0, 1.0);
    const auto draws = rtb::sample(spec, n, 92);
    // 4.5 standard errors of the sample variance (fourth central moment 24).
    CHECK(oracle::variance(draws) == doctest::Approx(2.0).epsilon(0.05 / 2.0));
  }
  const auto a = rtb::sample(DistributionSpec::gamma(0.7, 2.0), 1000, 7);
  const auto b = rtb::sample(DistributionSpec::gamma(0.7, 2.0), 1000, 7);
  CHECK(a == b);
  CHECK_THROWS_AS(rtb::sample(DistributionSpec::gamma(1.0, 1.0), 0, 1), Error);
}

TEST_CASE("sample moments across the grid at 4 standard errors") {
  const std::size_t n = 100000;
  std::uint64_t seed = 1000;
  for (const auto& spec : kGrid) {
    const auto m = rtb::moments(spec);
    const auto draws = rtb::sample(spec, n, seed++);
    const double se = std::sqrt(m.variance / static_cast<double>(n));
    CHECK(std::abs(oracle::mean(draws) - m.mean) < 4.0 * se);
  }
}

TEST_CASE("moments match the GLM mean-variance law exactly") {
  const auto ig = rtb::moments(DistributionSpec::inverse_gaussian(2.0, 1.0));
  CHECK(ig.mean == 2.0);
  CHECK(ig.variance == 8.0);
  const auto g2 = rtb::moments(DistributionSpec::gamma(2.0, 1.0));
  CHECK(g2.mean == 2.0);
  CHECK(g2.variance == 2.0);
  const auto g35 = rtb::moments(DistributionSpec::gamma(3.5, 1.0));
  CHECK(g35.mean == 3.5);
  CHECK(g35.variance == 3.5);

  for (const auto& spec : kGrid) {
    const auto m = rtb::moments(spec);
    if (spec.family() == Family::inverse_gaussian) {
      CHECK(m.variance / (m.mean * m.mean * m.mean) ==
            doctest::Approx(spec.ig().phi).epsilon(1e-15));
    } else {
      CHECK(m.variance / (m.mean * m.mean) ==
            doctest::Approx(1.0 / spec.gamma_params().shape).epsilon(1e-15));
    }
  }
}

TEST_CASE("fit_marginal recovers parameters") {
  const std::size_t n = 100000;
  {
    const auto draws = rtb::sample(DistributionSpec::inverse_gaussian(2.0, 1.0), n, 5);
    const auto fit = rtb::fit_marginal(draws, Family::inverse_gaussian);
    CHECK(fit.ig().mu == doctest::Approx(2.0).epsilon(0.03 / 2.0));
    CHECK(fit.ig().mu == doctest::Approx(oracle::mean(draws)).epsilon(1e-14));
  }
  {
    const auto draws = rtb::sample(DistributionSpec::gamma(2.0, 1.0), n, 6);
    const auto fit = rtb::fit_marginal(draws, Family::gamma);
    CHECK(fit.gamma_params().shape == doctest::Approx(2.0).epsilon(0.05 / 2.0));
  }
}

TEST_CASE("fit_marginal error paths") {
  const std::vector<double> constant(10, 1.0);
  try {
    rtb::fit_marginal(constant, Family::inverse_gaussian);
    FAIL("expected dispersion underflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_sample);
  }
  const std::vector<double> with_nonpositive = {1.0, 2.0, -0.5};
  CHECK_THROWS_AS(rtb::fit_marginal(with_nonpositive, Family::gamma), Error);
  const std::vector<double> too_short = {1.0};
  CHECK_THROWS_AS(rtb::fit_marginal(too_short, Family::gamma), Error);
}
