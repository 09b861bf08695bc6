#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "core/errors.hpp"
#include "core/glmm.hpp"
#include "core/ingest.hpp"
#include "support/oracles.hpp"

using rtb::DesignShape;
using rtb::Error;
using rtb::ErrorCode;
using rtb::Family;
using rtb::FitOptions;
using rtb::FittedGlmm;
using rtb::GlmmParams;
using rtb::ResponseModel;
using rtb::SynthesisTruth;
using rtb::TrialDataset;

namespace {

TrialDataset tiny_dataset() {
  TrialDataset ds;
  ds.level_count = 2;
  ds.records = {
      {"a", 1, 1, "r", 0.9}, {"a", 2, 1, "r", 1.4}, {"a", 1, 2, "r", 1.1},
      {"b", 1, 1, "r", 0.8}, {"b", 2, 1, "r", 1.7}, {"b", 2, 2, "r", 1.3},
      {"c", 1, 1, "r", 1.0}, {"c", 2, 1, "r", 1.6},
  };
  ds.subject_count = 3;
  return ds;
}

SynthesisTruth gamma_truth(int levels, double tau2, double phi) {
  SynthesisTruth truth;
  truth.beta.resize(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    truth.beta[static_cast<std::size_t>(i)] =
        -0.7 + 1.4 * i / std::max(1, levels - 1);
  }
  truth.tau2 = tau2;
  truth.family = Family::gamma;
  truth.dispersion = phi;
  return truth;
}

FittedGlmm hand_model(Family family, std::vector<double> beta, double tau2,
                      double phi) {
  FittedGlmm model;
  model.family = family;
  model.beta = std::move(beta);
  model.tau2 = tau2;
  model.dispersion = phi;
  model.converged = true;
  const int n = model.level_count();
  model.error_variance.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    model.error_variance[static_cast<std::size_t>(i)] =
        family == Family::gamma ? phi * std::exp(2.0 * model.beta[i] + 2.0 * tau2)
                                : phi * std::exp(3.0 * model.beta[i] + 4.5 * tau2);
  }
  model.ci_available.assign(static_cast<std::size_t>(n), true);
  model.vcov = Eigen::MatrixXd::Zero(n + 2, n + 2);
  return model;
}

}  // namespace

TEST_CASE("build_design produces indicator rows grouped by subject") {
  const auto ds = tiny_dataset();
  const auto design = rtb::build_design(ds);
  CHECK(design.rows() == 8);
  CHECK(design.level_count == 2);
  CHECK(design.subject_ids == std::vector<std::string>{"a", "b", "c"});
  // Rows are indicator vectors that sum to exactly 1.
  for (std::size_t r = 0; r < design.rows(); ++r) {
    const auto row = design.row(r);
    double total = 0.0;
    for (double v : row) total += v;
    CHECK(total == 1.0);
  }
  // A trial at level 2 has indicator (0, 1).
  const auto row1 = design.row(1);
  CHECK(row1[0] == 0.0);
  CHECK(row1[1] == 1.0);
  // Grouped by subject.
  for (std::size_t r = 1; r < design.rows(); ++r) {
    CHECK(design.subject[r] >= design.subject[r - 1]);
  }
}

TEST_CASE("build_design covers the experiment shape") {
  auto truth = gamma_truth(22, 0.1, 0.6);
  const auto ds = rtb::synthesize({22, 116, 7}, truth, 1);
  const auto design = rtb::build_design(ds);
  CHECK(design.rows() == 22u * 116u * 7u);
}

TEST_CASE("build_design rejects an unreferenced level") {
  auto ds = tiny_dataset();
  ds.level_count = 3;  // level 3 exists but has no trials
  try {
    rtb::build_design(ds);
    FAIL("expected design deficiency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::design_deficiency);
  }
}

TEST_CASE("marginal loglik collapses to the GLM sum at tau2 = 0") {
  const auto ds = tiny_dataset();
  const auto design = rtb::build_design(ds);
  const auto y = rtb::response_vector(ds, design);
  const GlmmParams params{{0.1, 0.4}, 0.0, 0.8};
  for (Family family : {Family::gamma, Family::inverse_gaussian}) {
    double glm = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
      const double mu = std::exp(params.beta[static_cast<std::size_t>(design.level[r])]);
      glm += family == Family::gamma
                 ? oracle::gamma_logpdf(y[r], 1.0 / params.dispersion,
                                        params.dispersion * mu)
                 : oracle::ig_logpdf(y[r], mu, params.dispersion);
    }
    const double ll = rtb::marginal_loglik(params, design, y, family, 15);
    CHECK(ll == doctest::Approx(glm).epsilon(1e-12));
  }
}

TEST_CASE("single subject, single trial matches 1-D quadrature") {
  TrialDataset ds;
  ds.level_count = 1;
  ds.records = {{"only", 1, 1, "r", 1.3}};
  ds.subject_count = 1;
  const auto design = rtb::build_design(ds);
  const auto y = rtb::response_vector(ds, design);
  const GlmmParams params{{0.2}, 0.3, 0.7};
  const double tau = std::sqrt(params.tau2);
  const auto integrand = [&](double c) {
    const double mu = std::exp(params.beta[0] + c);
    const double logf =
        oracle::gamma_logpdf(y[0], 1.0 / params.dispersion, params.dispersion * mu);
    const double prior = std::exp(-c * c / (2.0 * params.tau2)) /
                         std::sqrt(2.0 * M_PI * params.tau2);
    return std::exp(logf) * prior;
  };
  const double direct = std::log(oracle::integrate(integrand, -10.0 * tau, 10.0 * tau));
  const double ll = rtb::marginal_loglik(params, design, y, Family::gamma, 25);
  CHECK(ll == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("adaptive GH agrees with a dense-grid integration oracle") {
  auto truth = gamma_truth(3, 0.25, 0.5);
  const auto ds = rtb::synthesize({3, 5, 3}, truth, 11);
  const auto design = rtb::build_design(ds);
  const auto y = rtb::response_vector(ds, design);

  std::vector<int> subject(design.subject.begin(), design.subject.end());
  std::vector<int> level(design.level.begin(), design.level.end());
  for (Family family : {Family::gamma, Family::inverse_gaussian}) {
    const GlmmParams params{{0.1, -0.2, 0.3}, 0.2, 0.6};
    const double dense = oracle::glmm_loglik_dense(
        subject, level, y, params.beta, params.tau2, params.dispersion,
        family == Family::gamma);
    const double agq = rtb::marginal_loglik(params, design, y, family, 25);
    CHECK(agq == doctest::Approx(dense).epsilon(1e-5 / std::abs(dense)));
    CHECK(std::abs(agq - dense) < 1e-5);
  }
}

TEST_CASE("laplace approximation is the one-node rule") {
  const auto ds = tiny_dataset();
  const auto design = rtb::build_design(ds);
  const auto y = rtb::response_vector(ds, design);
  const GlmmParams params{{0.0, 0.3}, 0.2, 0.7};
  const double laplace = rtb::marginal_loglik(params, design, y, Family::gamma, 1);
  const double fine = rtb::marginal_loglik(params, design, y, Family::gamma, 25);
  CHECK(std::isfinite(laplace));
  CHECK(std::abs(laplace - fine) < 0.05);  // close but not identical
  CHECK(laplace != fine);
}

TEST_CASE("marginal loglik validates inputs") {
  const auto ds = tiny_dataset();
  const auto design = rtb::build_design(ds);
  const auto y = rtb::response_vector(ds, design);
  CHECK_THROWS_AS(
      rtb::marginal_loglik({{0.0}, 0.1, 0.5}, design, y, Family::gamma, 15), Error);
  CHECK_THROWS_AS(
      rtb::marginal_loglik({{0.0, 0.0}, -0.1, 0.5}, design, y, Family::gamma, 15),
      Error);
  CHECK_THROWS_AS(
      rtb::marginal_loglik({{0.0, 0.0}, 0.1, 0.5}, design, y, Family::gamma, 0),
      Error);
}

TEST_CASE("fit with a degenerate random effect matches the fixed-effects GLM") {
  auto truth = gamma_truth(4, 0.0, 0.5);
  const auto ds = rtb::synthesize({4, 30, 6}, truth, 21);
  const auto model = rtb::fit(ds, Family::gamma);
  CHECK(model.converged);
  CHECK(model.tau2 < 0.01);
  // Independent fixed-effects oracle: with a log link and cell-means coding
  // the GLM maximum-likelihood estimate is the per-level log sample mean.
  std::vector<double> sum(4, 0.0);
  std::vector<double> count(4, 0.0);
  for (const auto& r : ds.records) {
    sum[static_cast<std::size_t>(r.level_id - 1)] += r.rt_seconds;
    count[static_cast<std::size_t>(r.level_id - 1)] += 1.0;
  }
  for (int i = 0; i < 4; ++i) {
    const double glm = std::log(sum[static_cast<std::size_t>(i)] /
                                count[static_cast<std::size_t>(i)]);
    CHECK(model.beta[static_cast<std::size_t>(i)] ==
          doctest::Approx(glm).epsilon(1e-3));
  }
}

TEST_CASE("fit recovers the generating parameters at the experiment shape") {
  auto truth = gamma_truth(22, 0.18, 0.62);
  const auto ds = rtb::synthesize({22, 116, 7}, truth, 20260811);
  const auto model = rtb::fit(ds, Family::gamma);
  CHECK(model.converged);
  CHECK(std::abs(model.tau2 - 0.18) < 0.05);
  CHECK(std::abs(model.dispersion - 0.62) < 0.05);
  for (std::size_t i = 0; i < truth.beta.size(); ++i) {
    CHECK(std::abs(model.beta[i] - truth.beta[i]) < 0.1);
  }
  // AIC identity, exactly.
  CHECK(model.aic == -2.0 * model.loglik + 2.0 * (22 + 2));
  CHECK(rtb::aic(model) == model.aic);
  // vcov symmetric with nonnegative eigenvalues at convergence.
  CHECK((model.vcov - model.vcov.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.vcov);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("fit is bit-identical across runs and thread counts") {
  auto truth = gamma_truth(3, 0.15, 0.5);
  const auto ds = rtb::synthesize({3, 20, 4}, truth, 33);
  FitOptions one;
  one.threads = 1;
  FitOptions four;
  four.threads = 4;
  const auto m1 = rtb::fit(ds, Family::gamma, one);
  const auto m2 = rtb::fit(ds, Family::gamma, four);
  const auto m3 = rtb::fit(ds, Family::gamma, one);
  CHECK(m1.loglik == m2.loglik);
  CHECK(m1.loglik == m3.loglik);
  CHECK(m1.beta == m2.beta);
  CHECK(m1.tau2 == m2.tau2);
  CHECK(m1.dispersion == m2.dispersion);
  CHECK((m1.vcov - m2.vcov).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("fit refuses deficient designs") {
  auto ds = tiny_dataset();
  ds.level_count = 3;
  CHECK_THROWS_AS(rtb::fit(ds, Family::gamma), Error);
  TrialDataset single;
  single.level_count = 1;
  single.records = {{"only", 1, 1, "r", 1.0}, {"only", 1, 2, "r", 1.2}};
  single.subject_count = 1;
  CHECK_THROWS_AS(rtb::fit(single, Family::gamma), Error);
}

TEST_CASE("marginal mean closed form and MC oracle") {
  auto model = hand_model(Family::gamma, {0.0}, 0.0, 1.0);
  CHECK(rtb::marginal_mean(model, 1) == doctest::Approx(1.0));
  auto model2 = hand_model(Family::gamma, {std::log(2.0)}, 0.2, 1.0);
  CHECK(rtb::marginal_mean(model2, 1) ==
        doctest::Approx(2.0 * std::exp(0.1)).epsilon(1e-12));

  // Monte Carlo integration of exp(beta + C) over C ~ N(0, tau2).
  std::mt19937_64 engine(99);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.2));
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) acc += std::exp(std::log(2.0) + normal(engine));
  const double mc = acc / n;
  CHECK(rtb::marginal_mean(model2, 1) == doctest::Approx(mc).epsilon(1e-3));
}

TEST_CASE("marginal variance closed form and MC total-variance oracle") {
  // tau2 = 0: the between-subject term vanishes.
  auto base = hand_model(Family::gamma, {0.4}, 0.0, 0.7);
  CHECK(rtb::marginal_variance(base, 1) ==
        doctest::Approx(base.error_variance[0]).epsilon(1e-14));

  // beta=0, tau2=ln 2, sigma2 set to 1 by hand: 1 + e^{2 ln 2} (1 - 1/2) = 3.
  auto arith = hand_model(Family::gamma, {0.0}, std::log(2.0), 1.0);
  arith.error_variance = {1.0};
  CHECK(rtb::marginal_variance(arith, 1) == doctest::Approx(3.0).epsilon(1e-12));

  // MC law of total variance with the exact-mode error variance.
  auto model = hand_model(Family::gamma, {std::log(1.5)}, 0.15, 0.7);
  std::mt19937_64 engine(7);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.15));
  const int n = 1000000;
  double mean_v = 0.0, mean_m = 0.0, mean_m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mu = std::exp(std::log(1.5) + normal(engine));
    mean_v += 0.7 * mu * mu;  // V(Y|c) = phi mu^2 for the gamma family
    mean_m += mu;
    mean_m2 += mu * mu;
  }
  mean_v /= n;
  mean_m /= n;
  mean_m2 /= n;
  const double mc_total = mean_v + mean_m2 - mean_m * mean_m;
  CHECK(rtb::marginal_variance(model, 1) == doctest::Approx(mc_total).epsilon(0.005));
}

TEST_CASE("wald intervals") {
  auto model = hand_model(Family::gamma, {0.5, -0.2}, 0.1, 0.6);
  model.vcov(0, 0) = 0.0;   // zero standard error -> degenerate interval
  model.vcov(1, 1) = 0.04;  // se = 0.2
  const auto degenerate = rtb::wald_ci(model, 1, 0.95);
  REQUIRE(degenerate.has_value());
  CHECK(degenerate->lower == 0.5);
  CHECK(degenerate->upper == 0.5);
  const auto ci = rtb::wald_ci(model, 2, 0.95);
  REQUIRE(ci.has_value());
  CHECK(ci->lower == doctest::Approx(-0.2 - 1.959964 * 0.2).epsilon(1e-6));
  CHECK(ci->upper == doctest::Approx(-0.2 + 1.959964 * 0.2).epsilon(1e-6));
  model.ci_available[0] = false;
  CHECK_FALSE(rtb::wald_ci(model, 1, 0.95).has_value());
  CHECK_THROWS_AS(rtb::wald_ci(model, 1, 1.5), Error);
  CHECK_THROWS_AS(rtb::wald_ci(model, 1, 0.0), Error);
}

TEST_CASE("wald coverage on simulated small designs") {
  // Scaled-down coverage study; the full-size one runs in the acceptance
  // suite.
  auto truth = gamma_truth(3, 0.1, 0.5);
  int covered = 0;
  int total = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto ds = rtb::synthesize({3, 40, 5}, truth, 500 + seed);
    const auto model = rtb::fit(ds, Family::gamma);
    if (!model.converged) continue;
    for (int i = 1; i <= 3; ++i) {
      const auto ci = rtb::wald_ci(model, i, 0.95);
      if (!ci) continue;
      ++total;
      const double b = truth.beta[static_cast<std::size_t>(i - 1)];
      if (ci->lower <= b && b <= ci->upper) ++covered;
    }
  }
  REQUIRE(total >= 150);
  const double coverage = static_cast<double>(covered) / total;
  CHECK(coverage > 0.88);
  CHECK(coverage <= 1.0);
}

TEST_CASE("aic arithmetic and model selection") {
  auto model = hand_model(Family::gamma, std::vector<double>(22, 0.0), 0.1, 0.5);
  model.loglik = -100.0;
  CHECK(rtb::aic(model) == doctest::Approx(248.0));

  // Gamma-generated data prefers the gamma family by AIC.
  auto truth = gamma_truth(4, 0.15, 0.6);
  int gamma_wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = rtb::synthesize({4, 30, 5}, truth, 900 + seed);
    const auto g = rtb::fit(ds, Family::gamma);
    const auto ig = rtb::fit(ds, Family::inverse_gaussian);
    if (g.aic < ig.aic) ++gamma_wins;
  }
  CHECK(gamma_wins >= 9);
}

TEST_CASE("aic is stable in the quadrature order") {
  auto truth = gamma_truth(3, 0.2, 0.5);
  const auto ds = rtb::synthesize({3, 25, 5}, truth, 77);
  FitOptions coarse;
  coarse.nagq = 15;
  FitOptions fine;
  fine.nagq = 25;
  const auto a = rtb::fit(ds, Family::gamma, coarse);
  const auto b = rtb::fit(ds, Family::gamma, fine);
  CHECK(std::abs(a.aic - b.aic) < 0.1);
}

TEST_CASE("model JSON round trip") {
  auto truth = gamma_truth(3, 0.12, 0.5);
  const auto ds = rtb::synthesize({3, 15, 4}, truth, 3);
  FitOptions opt;
  auto model = rtb::fit(ds, Family::gamma, opt);
  model.seed = 42;
  model.response_label = "happy";
  const std::string text = rtb::glmm_to_json(model);
  const auto back = rtb::glmm_from_json(text);
  CHECK(back.family == model.family);
  CHECK(back.beta == model.beta);
  CHECK(back.tau2 == model.tau2);
  CHECK(back.dispersion == model.dispersion);
  CHECK(back.loglik == model.loglik);
  CHECK(back.aic == model.aic);
  CHECK(back.converged == model.converged);
  CHECK(back.ci_available == model.ci_available);
  CHECK(back.nagq == model.nagq);
  CHECK(back.seed == 42);
  CHECK(back.response_label == "happy");
  CHECK((back.vcov - model.vcov).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK_THROWS_AS(rtb::glmm_from_json("{not json"), Error);
  CHECK_THROWS_AS(rtb::glmm_from_json("{}"), Error);
}
