#include "core/glmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/optimize.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace rtb {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-subject/per-level sufficient statistics. With cell-means coding and a
// log link, every likelihood evaluation reduces to O(subjects x levels) work
// regardless of the trial count.
struct Aggregates {
  int subjects = 0;
  int levels = 0;
  Eigen::MatrixXd count;      // subjects x levels
  Eigen::MatrixXd sum_y;      // subjects x levels
  Eigen::VectorXd sum_log_y;  // per subject
  Eigen::VectorXd sum_inv_y;  // per subject
  Eigen::VectorXd trials;     // per subject
  Eigen::VectorXd level_count;  // per level
  Eigen::VectorXd level_sum_y;  // per level
  Eigen::VectorXd level_sum_y2; // per level
  std::size_t total_trials = 0;
};

Aggregates aggregate(const DesignMatrix& design, std::span<const double> y) {
  require(y.size() == design.rows(), ErrorCode::domain,
          "response vector length does not match the design");
  Aggregates agg;
  agg.subjects = static_cast<int>(design.subject_ids.size());
  agg.levels = design.level_count;
  agg.count = Eigen::MatrixXd::Zero(agg.subjects, agg.levels);
  agg.sum_y = Eigen::MatrixXd::Zero(agg.subjects, agg.levels);
  agg.sum_log_y = Eigen::VectorXd::Zero(agg.subjects);
  agg.sum_inv_y = Eigen::VectorXd::Zero(agg.subjects);
  agg.trials = Eigen::VectorXd::Zero(agg.subjects);
  agg.level_count = Eigen::VectorXd::Zero(agg.levels);
  agg.level_sum_y = Eigen::VectorXd::Zero(agg.levels);
  agg.level_sum_y2 = Eigen::VectorXd::Zero(agg.levels);
  for (std::size_t r = 0; r < design.rows(); ++r) {
    const double v = y[r];
    require(std::isfinite(v) && v > 0.0, ErrorCode::evaluation,
            "non-positive or non-finite RT at design row " + std::to_string(r) +
                " (dataset record " + std::to_string(design.record_index[r]) + ")");
    const int k = design.subject[r];
    const int i = design.level[r];
    agg.count(k, i) += 1.0;
    agg.sum_y(k, i) += v;
    agg.sum_log_y(k) += std::log(v);
    agg.sum_inv_y(k) += 1.0 / v;
    agg.trials(k) += 1.0;
    agg.level_count(i) += 1.0;
    agg.level_sum_y(i) += v;
    agg.level_sum_y2(i) += v * v;
  }
  agg.total_trials = design.rows();
  return agg;
}

// Subject-level conditional log-likelihood as a function of the random
// intercept c, reduced to the scalar coefficients computed per evaluation:
//   gamma: g(c) = -(w/phi) e^{-c} - (T/phi) c + const
//   IG:    g(c) = -(u e^{-2c} - 2 v e^{-c}) / (2 phi) + const
struct SubjectCurve {
  Family family;
  double w = 0.0;  // gamma: sum y exp(-beta); IG: unused
  double u = 0.0;  // IG: sum y exp(-2 beta)
  double v = 0.0;  // IG: sum exp(-beta)
  double trials = 0.0;
  double phi = 1.0;
  double constant = 0.0;

  double value(double c) const {
    if (family == Family::gamma) {
      return -(w / phi) * std::exp(-c) - (trials / phi) * c + constant;
    }
    const double e1 = std::exp(-c);
    return -(u * e1 * e1 - 2.0 * v * e1) / (2.0 * phi) + constant;
  }
  double deriv(double c) const {
    if (family == Family::gamma) {
      return (w / phi) * std::exp(-c) - trials / phi;
    }
    const double e1 = std::exp(-c);
    return (u * e1 * e1 - v * e1) / phi;
  }
  double second(double c) const {
    if (family == Family::gamma) {
      return -(w / phi) * std::exp(-c);
    }
    const double e1 = std::exp(-c);
    return (-2.0 * u * e1 * e1 + v * e1) / phi;
  }
};

// Mode of g(c) - c^2/(2 tau2): safeguarded Newton inside a sign-change
// bracket of the derivative.
double conditional_mode(const SubjectCurve& curve, double tau2) {
  const auto dl = [&](double c) { return curve.deriv(c) - c / tau2; };
  double lo = -1.0;
  int guard = 0;
  while (dl(lo) < 0.0) {
    lo *= 2.0;
    if (++guard > 60) return std::numeric_limits<double>::quiet_NaN();
  }
  double hi = 1.0;
  guard = 0;
  while (dl(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 60) return std::numeric_limits<double>::quiet_NaN();
  }
  double c = 0.0;
  if (c < lo || c > hi) c = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double d1 = dl(c);
    if (d1 > 0.0) {
      lo = c;
    } else {
      hi = c;
    }
    const double d2 = curve.second(c) - 1.0 / tau2;
    double next = c - d1 / d2;
    if (!std::isfinite(next) || next <= lo || next >= hi || d2 >= 0.0) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - c) <= 1e-13 * (1.0 + std::abs(next))) {
      return next;
    }
    c = next;
  }
  return c;
}

class MarginalEvaluator {
 public:
  MarginalEvaluator(const Aggregates& agg, Family family, int nagq, int threads)
      : agg_(agg), family_(family), rule_(gauss_hermite(nagq)), threads_(threads) {}

  // Returns -inf instead of throwing so optimizer line searches can back off.
  double loglik(const Eigen::VectorXd& beta, double tau2, double phi) const {
    if (!beta.allFinite() || !(phi > 0.0) || !(tau2 >= 0.0) || !std::isfinite(phi) ||
        !std::isfinite(tau2) || beta.lpNorm<Eigen::Infinity>() > 300.0) {
      return kNegInf;
    }
    const int m = agg_.subjects;
    std::vector<SubjectCurve> curves(m);
    const Eigen::ArrayXd exp_neg = (-beta.array()).exp();
    if (family_ == Family::gamma) {
      const Eigen::VectorXd w = agg_.sum_y * exp_neg.matrix();
      const Eigen::VectorXd b = agg_.count * beta;
      const double inv_phi = 1.0 / phi;
      const double lgamma_a = std::lgamma(inv_phi);
      const double log_phi = std::log(phi);
      for (int k = 0; k < m; ++k) {
        SubjectCurve& c = curves[k];
        c.family = family_;
        c.w = w(k);
        c.trials = agg_.trials(k);
        c.phi = phi;
        c.constant = (inv_phi - 1.0) * agg_.sum_log_y(k) - inv_phi * b(k) -
                     inv_phi * c.trials * log_phi - c.trials * lgamma_a;
      }
    } else {
      const Eigen::ArrayXd exp_neg2 = exp_neg * exp_neg;
      const Eigen::VectorXd u = agg_.sum_y * exp_neg2.matrix();
      const Eigen::VectorXd v = agg_.count * exp_neg.matrix();
      const double log_phi = std::log(phi);
      for (int k = 0; k < m; ++k) {
        SubjectCurve& c = curves[k];
        c.family = family_;
        c.u = u(k);
        c.v = v(k);
        c.trials = agg_.trials(k);
        c.phi = phi;
        c.constant = -0.5 * c.trials * (kLog2Pi + log_phi) -
                     1.5 * agg_.sum_log_y(k) - agg_.sum_inv_y(k) / (2.0 * phi);
      }
    }

    std::vector<double> contributions(m);
    if (tau2 == 0.0) {
      // Degenerate random effect: the integral collapses to the GLM sum.
      for (int k = 0; k < m; ++k) contributions[k] = curves[k].value(0.0);
    } else {
      const double log_prior_norm = -0.5 * (kLog2Pi + std::log(tau2));
      parallel_chunks(static_cast<std::size_t>(m), threads_,
                      [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          contributions[k] =
              subject_loglik(curves[k], tau2, log_prior_norm);
        }
      });
    }
    double total = 0.0;
    for (int k = 0; k < m; ++k) total += contributions[k];
    return std::isfinite(total) ? total : kNegInf;
  }

 private:
  double subject_loglik(const SubjectCurve& curve, double tau2,
                        double log_prior_norm) const {
    const auto lp = [&](double c) {
      return curve.value(c) - c * c / (2.0 * tau2) + log_prior_norm;
    };
    const double mode = conditional_mode(curve, tau2);
    if (!std::isfinite(mode)) return kNegInf;
    const double curvature = -(curve.second(mode) - 1.0 / tau2);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) return kNegInf;
    const double scale = std::sqrt(2.0 / curvature);
    const std::size_t q = rule_.nodes.size();
    double max_term = kNegInf;
    thread_local std::vector<double> terms;
    terms.assign(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
      const double z = rule_.nodes[j];
      const double t = rule_.log_weights[j] + z * z + lp(mode + scale * z);
      terms[j] = t;
      max_term = std::max(max_term, t);
    }
    if (!std::isfinite(max_term)) return kNegInf;
    double acc = 0.0;
    for (std::size_t j = 0; j < q; ++j) acc += std::exp(terms[j] - max_term);
    return std::log(scale) + max_term + std::log(acc);
  }

  const Aggregates& agg_;
  Family family_;
  GhRule rule_;
  int threads_;
};

// Exact fixed-effects GLM estimate for the log link with cell-means coding:
// the score per level vanishes at the level's log sample mean for both
// families, so IRLS lands there in one step.
Eigen::VectorXd fixed_effects_glm(const Aggregates& agg) {
  Eigen::VectorXd beta(agg.levels);
  for (int i = 0; i < agg.levels; ++i) {
    beta(i) = std::log(agg.level_sum_y(i) / agg.level_count(i));
  }
  return beta;
}

double pearson_dispersion(const Aggregates& agg, const Eigen::VectorXd& beta,
                          Family family) {
  double acc = 0.0;
  for (int i = 0; i < agg.levels; ++i) {
    const double mu = std::exp(beta(i));
    const double ss = agg.level_sum_y2(i) - 2.0 * mu * agg.level_sum_y(i) +
                      agg.level_count(i) * mu * mu;
    const double vpow = family == Family::gamma ? mu * mu : mu * mu * mu;
    acc += ss / vpow;
  }
  const double dof =
      static_cast<double>(agg.total_trials) - static_cast<double>(agg.levels);
  double phi = acc / std::max(dof, 1.0);
  return std::clamp(phi, 1e-8, 1e8);
}

std::vector<double> error_variance_per_level(const std::vector<double>& beta,
                                             double tau2, double phi, Family family,
                                             ErrorVarianceMode mode) {
  // Integral of V(Y|c) over the random effect:
  //   gamma: phi * exp(2 beta_i + 2 tau2)
  //   IG:    phi * exp(3 beta_i + 4.5 tau2)
  std::vector<double> out(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    out[i] = family == Family::gamma
                 ? phi * std::exp(2.0 * beta[i] + 2.0 * tau2)
                 : phi * std::exp(3.0 * beta[i] + 4.5 * tau2);
  }
  if (mode == ErrorVarianceMode::paper_compatible) {
    double pooled = 0.0;
    for (double v : out) pooled += v;
    pooled /= static_cast<double>(out.size());
    std::fill(out.begin(), out.end(), pooled);
  }
  return out;
}

}  // namespace

std::vector<double> DesignMatrix::row(std::size_t r) const {
  std::vector<double> indicator(static_cast<std::size_t>(level_count), 0.0);
  indicator[static_cast<std::size_t>(level[r])] = 1.0;
  return indicator;
}

DesignMatrix build_design(const TrialDataset& dataset) {
  require(dataset.level_count >= 1, ErrorCode::design_deficiency,
          "dataset declares no levels");
  require(!dataset.records.empty(), ErrorCode::design_deficiency,
          "dataset has no trials");
  DesignMatrix design;
  design.level_count = dataset.level_count;

  std::map<std::string, int> subject_index;
  std::vector<std::vector<std::size_t>> rows_per_subject;
  for (std::size_t r = 0; r < dataset.records.size(); ++r) {
    const auto& rec = dataset.records[r];
    require(rec.level_id >= 1 && rec.level_id <= dataset.level_count,
            ErrorCode::design_deficiency,
            "record " + std::to_string(r) + " references level " +
                std::to_string(rec.level_id) + " outside 1.." +
                std::to_string(dataset.level_count));
    auto [it, inserted] =
        subject_index.try_emplace(rec.subject_id,
                                  static_cast<int>(design.subject_ids.size()));
    if (inserted) {
      design.subject_ids.push_back(rec.subject_id);
      rows_per_subject.emplace_back();
    }
    rows_per_subject[static_cast<std::size_t>(it->second)].push_back(r);
  }

  std::vector<std::size_t> level_counts(static_cast<std::size_t>(dataset.level_count), 0);
  for (std::size_t k = 0; k < rows_per_subject.size(); ++k) {
    for (std::size_t r : rows_per_subject[k]) {
      design.level.push_back(dataset.records[r].level_id - 1);
      design.subject.push_back(static_cast<int>(k));
      design.record_index.push_back(r);
      ++level_counts[static_cast<std::size_t>(dataset.records[r].level_id - 1)];
    }
  }
  for (int i = 0; i < dataset.level_count; ++i) {
    require(level_counts[static_cast<std::size_t>(i)] > 0, ErrorCode::design_deficiency,
            "level " + std::to_string(i + 1) + " has no trials");
  }
  return design;
}

std::vector<double> response_vector(const TrialDataset& dataset,
                                    const DesignMatrix& design) {
  std::vector<double> y(design.rows());
  for (std::size_t r = 0; r < design.rows(); ++r) {
    y[r] = dataset.records[design.record_index[r]].rt_seconds;
  }
  return y;
}

double marginal_loglik(const GlmmParams& params, const DesignMatrix& design,
                       std::span<const double> y, Family family, int nagq,
                       int threads) {
  require(params.beta.size() == static_cast<std::size_t>(design.level_count),
          ErrorCode::domain, "beta must have one entry per level");
  require(params.tau2 >= 0.0 && std::isfinite(params.tau2), ErrorCode::domain,
          "tau2 must be >= 0");
  require(params.dispersion > 0.0 && std::isfinite(params.dispersion),
          ErrorCode::domain, "dispersion must be positive");
  require(nagq >= 1, ErrorCode::domain, "nagq must be >= 1");
  const Aggregates agg = aggregate(design, y);
  const MarginalEvaluator evaluator(agg, family, nagq, threads);
  const Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(
      params.beta.data(), static_cast<Eigen::Index>(params.beta.size()));
  const double value = evaluator.loglik(beta, params.tau2, params.dispersion);
  require(std::isfinite(value), ErrorCode::evaluation,
          "marginal log-likelihood is not finite at the supplied parameters");
  return value;
}

std::string error_variance_mode_name(ErrorVarianceMode mode) {
  return mode == ErrorVarianceMode::exact ? "exact" : "paper_compatible";
}

ErrorVarianceMode error_variance_mode_from_name(const std::string& name) {
  if (name == "exact") return ErrorVarianceMode::exact;
  if (name == "paper_compatible") return ErrorVarianceMode::paper_compatible;
  throw Error(ErrorCode::schema, "unknown error-variance mode: " + name);
}

FittedGlmm fit(const TrialDataset& dataset, Family family, const FitOptions& options) {
  const DesignMatrix design = build_design(dataset);
  require(design.subject_ids.size() >= 2, ErrorCode::design_deficiency,
          "fit requires at least 2 subjects");
  require(options.nagq >= 1, ErrorCode::domain, "nagq must be >= 1");
  const std::vector<double> y = response_vector(dataset, design);
  const Aggregates agg = aggregate(design, y);
  const MarginalEvaluator evaluator(agg, family, options.nagq, options.threads);

  const int n = design.level_count;
  Eigen::VectorXd theta(n + 2);
  if (options.init) {
    require(options.init->beta.size() == static_cast<std::size_t>(n),
            ErrorCode::domain, "init.beta must have one entry per level");
    for (int i = 0; i < n; ++i) theta(i) = options.init->beta[static_cast<std::size_t>(i)];
    theta(n) = std::log(std::max(options.init->tau2, 1e-10));
    theta(n + 1) = std::log(options.init->dispersion);
  } else {
    // Warm start: fixed-effects GLM for beta, tau2 = 0.1, Pearson phi.
    const Eigen::VectorXd beta0 = fixed_effects_glm(agg);
    theta.head(n) = beta0;
    theta(n) = std::log(0.1);
    theta(n + 1) = std::log(pearson_dispersion(agg, beta0, family));
  }

  const ObjectiveFn objective = [&](const Eigen::VectorXd& t) {
    const double log_tau2 = t(n);
    const double log_phi = t(n + 1);
    if (log_tau2 > 40.0 || log_phi > 40.0) {
      return std::numeric_limits<double>::infinity();
    }
    const double ll =
        evaluator.loglik(t.head(n), std::exp(log_tau2), std::exp(log_phi));
    return -ll;
  };

  BfgsOptions bfgs;
  bfgs.max_iterations = options.max_iterations;
  bfgs.fd_step = 1e-6;
  const BfgsResult opt = minimize_bfgs(objective, theta, bfgs);

  FittedGlmm model;
  model.family = family;
  model.nagq = options.nagq;
  model.converged = opt.converged;
  model.beta.assign(opt.x.data(), opt.x.data() + n);
  const double log_tau2_hat = opt.x(n);
  // log tau2 below -12 is the boundary in disguise; report exactly 0.
  model.tau2 = log_tau2_hat < -12.0 ? 0.0 : std::exp(log_tau2_hat);
  model.dispersion = std::exp(opt.x(n + 1));
  model.loglik = -opt.value;
  model.aic = -2.0 * model.loglik + 2.0 * (n + 2);
  model.error_variance_mode = options.error_variance_mode;
  model.error_variance = error_variance_per_level(
      model.beta, model.tau2, model.dispersion, family, options.error_variance_mode);

  // Observed information by central differences on the transformed scale.
  const Eigen::MatrixXd info = numeric_hessian(objective, opt.x, 1e-5);
  model.ci_available.assign(static_cast<std::size_t>(n), false);
  model.vcov = Eigen::MatrixXd::Constant(n + 2, n + 2,
                                         std::numeric_limits<double>::quiet_NaN());
  if (info.allFinite()) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success) {
      Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(n + 2, n + 2));
      if (cov.allFinite()) {
        cov = 0.5 * (cov + cov.transpose()).eval();
        model.vcov = cov;
        for (int i = 0; i < n; ++i) {
          model.ci_available[static_cast<std::size_t>(i)] =
              std::isfinite(cov(i, i)) && cov(i, i) >= 0.0;
        }
      }
    }
  }
  return model;
}

double marginal_mean(const FittedGlmm& model, int level) {
  require(level >= 1 && level <= model.level_count(), ErrorCode::domain,
          "level out of range");
  return std::exp(model.beta[static_cast<std::size_t>(level - 1)] + model.tau2 / 2.0);
}

double marginal_variance(const FittedGlmm& model, int level) {
  require(level >= 1 && level <= model.level_count(), ErrorCode::domain,
          "level out of range");
  const double beta = model.beta[static_cast<std::size_t>(level - 1)];
  const double sigma2 = model.error_variance[static_cast<std::size_t>(level - 1)];
  return sigma2 +
         std::exp(2.0 * beta + 2.0 * model.tau2) * (1.0 - std::exp(-model.tau2));
}

std::optional<WaldInterval> wald_ci(const FittedGlmm& model, int level,
                                    double confidence) {
  require(level >= 1 && level <= model.level_count(), ErrorCode::domain,
          "level out of range");
  require(confidence > 0.0 && confidence < 1.0, ErrorCode::domain,
          "confidence must be in (0,1)");
  const std::size_t i = static_cast<std::size_t>(level - 1);
  if (!model.ci_available[i]) return std::nullopt;
  const double se = std::sqrt(model.vcov(level - 1, level - 1));
  const double z = special::norm_quantile(0.5 * (1.0 + confidence));
  const double center = model.beta[i];
  return WaldInterval{center - z * se, center + z * se};
}

double aic(const FittedGlmm& model) {
  return -2.0 * model.loglik + 2.0 * (model.level_count() + 2);
}

namespace {

nlohmann::json double_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double json_double(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

std::string glmm_to_json(const FittedGlmm& model) {
  nlohmann::json j;
  j["family"] = family_name(model.family);
  j["link"] = model.link;
  j["beta"] = model.beta;
  j["tau2"] = model.tau2;
  j["dispersion"] = model.dispersion;
  j["error_variance_mode"] = error_variance_mode_name(model.error_variance_mode);
  j["error_variance"] = model.error_variance;
  j["loglik"] = model.loglik;
  j["aic"] = model.aic;
  nlohmann::json vcov = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.vcov.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.vcov.cols(); ++c) {
      vcov.push_back(double_or_null(model.vcov(r, c)));
    }
  }
  j["vcov"] = std::move(vcov);
  j["converged"] = model.converged;
  j["ci_available"] = model.ci_available;
  j["nagq"] = model.nagq;
  j["seed"] = model.seed;
  if (!model.response_label.empty()) j["response"] = model.response_label;
  return j.dump(2) + "\n";
}

FittedGlmm glmm_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("model JSON parse error: ") + e.what());
  }
  try {
    FittedGlmm model;
    model.family = family_from_name(j.at("family").get<std::string>());
    model.link = j.at("link").get<std::string>();
    require(model.link == "log", ErrorCode::schema, "only the log link is supported");
    model.beta = j.at("beta").get<std::vector<double>>();
    model.tau2 = j.at("tau2").get<double>();
    model.dispersion = j.at("dispersion").get<double>();
    model.error_variance_mode =
        error_variance_mode_from_name(j.at("error_variance_mode").get<std::string>());
    model.error_variance = j.at("error_variance").get<std::vector<double>>();
    model.loglik = j.at("loglik").get<double>();
    model.aic = j.at("aic").get<double>();
    const int n = model.level_count();
    require(model.error_variance.size() == model.beta.size(), ErrorCode::schema,
            "error_variance length mismatch");
    const auto& vcov = j.at("vcov");
    require(vcov.size() == static_cast<std::size_t>((n + 2) * (n + 2)),
            ErrorCode::schema, "vcov length mismatch");
    model.vcov.resize(n + 2, n + 2);
    std::size_t idx = 0;
    for (int r = 0; r < n + 2; ++r) {
      for (int c = 0; c < n + 2; ++c) {
        model.vcov(r, c) = json_double(vcov.at(idx++));
      }
    }
    model.converged = j.at("converged").get<bool>();
    model.ci_available = j.at("ci_available").get<std::vector<bool>>();
    require(model.ci_available.size() == model.beta.size(), ErrorCode::schema,
            "ci_available length mismatch");
    model.nagq = j.at("nagq").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("response")) model.response_label = j["response"].get<std::string>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("model JSON field error: ") + e.what());
  }
}

void write_json(const FittedGlmm& model, const std::filesystem::path& path) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io, "cannot write " + path.string());
  os << glmm_to_json(model);
  os.flush();
  require(os.good(), ErrorCode::io, "write failed for " + path.string());
}

FittedGlmm read_glmm_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(is.good(), ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return glmm_from_json(ss.str());
}

}  // namespace rtb
