#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/distributions.hpp"
#include "core/ingest.hpp"

namespace rtb {

// Cell-means indicator design: each row is the indicator vector of its
// level, so rows sum to exactly 1 and there is no global intercept. Rows are
// grouped by subject for quadrature efficiency.
struct DesignMatrix {
  int level_count = 0;
  std::vector<int> level;                 // per row, 0-based
  std::vector<int> subject;               // per row, 0-based, contiguous
  std::vector<std::string> subject_ids;   // per subject
  std::vector<std::size_t> record_index;  // row -> dataset record

  std::size_t rows() const { return level.size(); }
  std::vector<double> row(std::size_t r) const;
};

DesignMatrix build_design(const TrialDataset& dataset);

// RTs in design-row order.
std::vector<double> response_vector(const TrialDataset& dataset,
                                    const DesignMatrix& design);

struct GlmmParams {
  std::vector<double> beta;  // log-scale cell means
  double tau2 = 0.0;         // random-intercept variance
  double dispersion = 1.0;   // phi
};

// Marginal log-likelihood: sum over subjects of
// log Integral prod_trials f(y | exp(x'beta + c)) N(c; 0, tau2) dc,
// approximated by adaptive Gauss-Hermite quadrature centered at each
// subject's conditional mode. nagq = 1 is the Laplace approximation; at
// tau2 = 0 the integral collapses to the independent GLM log-likelihood.
double marginal_loglik(const GlmmParams& params, const DesignMatrix& design,
                       std::span<const double> y, Family family, int nagq,
                       int threads = 1);

// How the error variance sigma^2 entering the marginal-variance formula is
// computed. `exact` evaluates Integral V(Y|c) g(c) dc per family and level;
// `paper_compatible` pools those values into a single constant.
enum class ErrorVarianceMode { exact, paper_compatible };

std::string error_variance_mode_name(ErrorVarianceMode mode);
ErrorVarianceMode error_variance_mode_from_name(const std::string& name);

struct FittedGlmm {
  Family family = Family::gamma;
  std::string link = "log";
  std::vector<double> beta;
  double tau2 = 0.0;
  double dispersion = 1.0;
  ErrorVarianceMode error_variance_mode = ErrorVarianceMode::exact;
  std::vector<double> error_variance;  // per level
  double loglik = 0.0;
  double aic = 0.0;
  Eigen::MatrixXd vcov;  // (n+2)x(n+2) covariance of (beta, log tau2, log phi)
  bool converged = false;
  std::vector<bool> ci_available;  // per fixed-effect coefficient
  int nagq = 15;
  std::uint64_t seed = 0;       // provenance (run seed), not used by the fit
  std::string response_label;   // provenance; empty if unconditioned

  int level_count() const { return static_cast<int>(beta.size()); }
};

struct FitOptions {
  int nagq = 15;
  int threads = 1;
  int max_iterations = 500;
  ErrorVarianceMode error_variance_mode = ErrorVarianceMode::exact;
  std::optional<GlmmParams> init;
};

// ML fit of (beta, log tau2, log phi) by quasi-Newton maximization of the
// adaptive-GH marginal likelihood. Never throws on optimizer
// non-convergence; the result carries converged = false instead.
FittedGlmm fit(const TrialDataset& dataset, Family family, const FitOptions& options = {});

double marginal_mean(const FittedGlmm& model, int level);      // level is 1-based
double marginal_variance(const FittedGlmm& model, int level);

struct WaldInterval {
  double lower;
  double upper;
};

// std::nullopt when the coefficient's standard error is unavailable.
std::optional<WaldInterval> wald_ci(const FittedGlmm& model, int level,
                                    double confidence);

double aic(const FittedGlmm& model);

std::string glmm_to_json(const FittedGlmm& model);
FittedGlmm glmm_from_json(const std::string& text);
void write_json(const FittedGlmm& model, const std::filesystem::path& path);
FittedGlmm read_glmm_json(const std::filesystem::path& path);

}  // namespace rtb
