#include "rtbridge.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core/diffusion.hpp"
#include "core/distributions.hpp"
#include "core/errors.hpp"
#include "core/glmm.hpp"
#include "core/gof.hpp"
#include "core/ingest.hpp"
#include "core/reconstruction.hpp"
#include "core/responses.hpp"

namespace {

thread_local std::string g_last_error;

rtb_status map_code(rtb::ErrorCode code) {
  using rtb::ErrorCode;
  switch (code) {
    case ErrorCode::parameter_domain:
    case ErrorCode::domain:
      return RTB_E_DOMAIN;
    case ErrorCode::empty_sample:
    case ErrorCode::degenerate_sample:
    case ErrorCode::design_deficiency:
    case ErrorCode::evaluation:
    case ErrorCode::excess_truncation:
    case ErrorCode::empty_partition:
    case ErrorCode::undefined_probability:
      return RTB_E_DATA;
    case ErrorCode::not_converged:
      return RTB_E_CONVERGENCE;
    case ErrorCode::schema:
      return RTB_E_SCHEMA;
    case ErrorCode::io:
      return RTB_E_IO;
  }
  return RTB_E_INTERNAL;
}

template <typename Fn>
rtb_status guarded(Fn&& fn) {
  try {
    fn();
    return RTB_OK;
  } catch (const rtb::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RTB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RTB_E_INTERNAL;
  }
}

rtb_status fail_null(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return RTB_E_DOMAIN;
}

rtb::Family to_family(rtb_family family) {
  return family == RTB_FAMILY_GAMMA ? rtb::Family::gamma
                                    : rtb::Family::inverse_gaussian;
}

rtb_family from_family(rtb::Family family) {
  return family == rtb::Family::gamma ? RTB_FAMILY_GAMMA
                                      : RTB_FAMILY_INVERSE_GAUSSIAN;
}

rtb::DistributionSpec to_spec(const rtb_dist& dist) {
  return dist.family == RTB_FAMILY_GAMMA
             ? rtb::DistributionSpec::gamma(dist.p1, dist.p2)
             : rtb::DistributionSpec::inverse_gaussian(dist.p1, dist.p2);
}

rtb_dist from_spec(const rtb::DistributionSpec& spec) {
  rtb_dist dist;
  dist.family = from_family(spec.family());
  if (spec.family() == rtb::Family::gamma) {
    dist.p1 = spec.gamma_params().shape;
    dist.p2 = spec.gamma_params().scale;
  } else {
    dist.p1 = spec.ig().mu;
    dist.p2 = spec.ig().phi;
  }
  return dist;
}

rtb::DiffusionSpec to_diffusion(const rtb_reconstruction& rec) {
  rtb::DiffusionSpec spec;
  if (rec.start_is_gamma_sum) {
    spec.start = rtb::GammaSumStart{rec.start_shape, rec.start_scale};
  } else {
    spec.start = rtb::FixedStart{rec.start_a};
  }
  spec.drift = rec.drift;
  spec.delta = rec.delta;
  return spec;
}

}  // namespace

struct rtb_dataset {
  rtb::TrialDataset data;
  std::vector<std::string> labels;

  void refresh_labels() {
    std::set<std::string> distinct;
    for (const auto& rec : data.records) {
      if (!rec.response.empty()) distinct.insert(rec.response);
    }
    labels.assign(distinct.begin(), distinct.end());
  }
};

struct rtb_model {
  rtb::FittedGlmm model;
};

struct rtb_fht {
  rtb::FhtSample sample;
};

struct rtb_gof {
  rtb::GofReport report;
};

struct rtb_mixture {
  rtb::MixtureModel model;
};

extern "C" {

const char* rtb_last_error(void) { return g_last_error.c_str(); }

const char* rtb_version(void) { return "0.1.0"; }

/* ---- distributions ---- */

rtb_status rtb_dist_pdf(const rtb_dist* dist, double y, double* out) {
  if (!dist || !out) return fail_null("dist/out");
  return guarded([&] { *out = rtb::pdf(to_spec(*dist), y); });
}

rtb_status rtb_dist_cdf(const rtb_dist* dist, double y, double* out) {
  if (!dist || !out) return fail_null("dist/out");
  return guarded([&] { *out = rtb::cdf(to_spec(*dist), y); });
}

rtb_status rtb_dist_quantile(const rtb_dist* dist, double p, double* out) {
  if (!dist || !out) return fail_null("dist/out");
  return guarded([&] { *out = rtb::quantile(to_spec(*dist), p); });
}

rtb_status rtb_dist_moments(const rtb_dist* dist, double* mean, double* variance) {
  if (!dist || !mean || !variance) return fail_null("dist/mean/variance");
  return guarded([&] {
    const auto m = rtb::moments(to_spec(*dist));
    *mean = m.mean;
    *variance = m.variance;
  });
}

rtb_status rtb_dist_sample(const rtb_dist* dist, size_t n, uint64_t seed,
                           double* out) {
  if (!dist || !out) return fail_null("dist/out");
  return guarded([&] {
    const auto draws = rtb::sample(to_spec(*dist), n, seed);
    std::memcpy(out, draws.data(), draws.size() * sizeof(double));
  });
}

rtb_status rtb_dist_fit(const double* values, size_t n, rtb_family family,
                        rtb_dist* out) {
  if (!values || !out) return fail_null("values/out");
  return guarded([&] {
    *out = from_spec(
        rtb::fit_marginal(std::span<const double>(values, n), to_family(family)));
  });
}

/* ---- datasets ---- */

rtb_status rtb_dataset_read_csv(const char* path, int level_count,
                                rtb_dataset** out) {
  if (!path || !out) return fail_null("path/out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_dataset>();
    handle->data = rtb::read_csv(path, level_count);
    handle->refresh_labels();
    *out = handle.release();
  });
}

rtb_status rtb_dataset_write_csv(const rtb_dataset* dataset, const char* path) {
  if (!dataset || !path) return fail_null("dataset/path");
  return guarded([&] { rtb::write_csv(dataset->data, std::filesystem::path(path)); });
}

void rtb_dataset_free(rtb_dataset* dataset) { delete dataset; }

int rtb_dataset_level_count(const rtb_dataset* dataset) {
  return dataset ? dataset->data.level_count : 0;
}

int rtb_dataset_subject_count(const rtb_dataset* dataset) {
  return dataset ? dataset->data.subject_count : 0;
}

size_t rtb_dataset_trial_count(const rtb_dataset* dataset) {
  return dataset ? dataset->data.records.size() : 0;
}

size_t rtb_dataset_rejected_count(const rtb_dataset* dataset) {
  return dataset ? dataset->data.rejected_total() : 0;
}

size_t rtb_dataset_dropped_count(const rtb_dataset* dataset) {
  if (!dataset) return 0;
  size_t dropped = 0;
  for (const auto& rec : dataset->data.records) {
    if (rec.response.empty()) ++dropped;
  }
  return dropped;
}

size_t rtb_dataset_label_count(const rtb_dataset* dataset) {
  return dataset ? dataset->labels.size() : 0;
}

const char* rtb_dataset_label(const rtb_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->labels.size()) return nullptr;
  return dataset->labels[index].c_str();
}

rtb_status rtb_dataset_filter_response(const rtb_dataset* dataset, const char* label,
                                       rtb_dataset** out) {
  if (!dataset || !label || !out) return fail_null("dataset/label/out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_dataset>();
    handle->data = rtb::filter_by_response(dataset->data, label);
    handle->refresh_labels();
    *out = handle.release();
  });
}

rtb_status rtb_dataset_response_probs(const rtb_dataset* dataset, int level,
                                      double* out) {
  if (!dataset || !out) return fail_null("dataset/out");
  return guarded([&] {
    const auto partition = rtb::partition_by_response(dataset->data);
    const auto table = rtb::response_probs(partition, dataset->data);
    rtb::require(level >= 1 && level <= dataset->data.level_count,
                 rtb::ErrorCode::domain, "level out of range");
    const auto& row = table.probs[static_cast<std::size_t>(level - 1)];
    std::memcpy(out, row.data(), row.size() * sizeof(double));
  });
}

rtb_status rtb_dataset_write_response_table(const rtb_dataset* dataset,
                                            const char* path,
                                            int* small_sample_warning) {
  if (!dataset || !path) return fail_null("dataset/path");
  return guarded([&] {
    const auto partition = rtb::partition_by_response(dataset->data);
    const auto table = rtb::response_probs(partition, dataset->data);
    std::ofstream os(path);
    rtb::require(os.good(), rtb::ErrorCode::io,
                 "cannot write " + std::string(path));
    rtb::write_csv(table, os);
    os.flush();
    rtb::require(os.good(), rtb::ErrorCode::io,
                 "write failed for " + std::string(path));
    if (small_sample_warning) {
      *small_sample_warning = table.small_sample_warning ? 1 : 0;
    }
  });
}

rtb_status rtb_dataset_synthesize(int levels, int subjects, int reps,
                                  const rtb_synth_truth* truth, uint64_t seed,
                                  rtb_dataset** out) {
  if (!truth || !truth->beta || !out) return fail_null("truth/beta/out");
  return guarded([&] {
    rtb::SynthesisTruth t;
    t.beta.assign(truth->beta, truth->beta + levels);
    t.tau2 = truth->tau2;
    t.family = to_family(truth->family);
    t.dispersion = truth->dispersion;
    if (truth->labels && truth->label_count > 0) {
      std::vector<std::string> labels(truth->labels,
                                      truth->labels + truth->label_count);
      std::vector<double> probs(truth->label_probs,
                                truth->label_probs + truth->label_count);
      t.responses = rtb::ResponseModel::shared(std::move(labels), std::move(probs));
    }
    auto handle = std::make_unique<rtb_dataset>();
    handle->data = rtb::synthesize({levels, subjects, reps}, t, seed);
    handle->refresh_labels();
    *out = handle.release();
  });
}

/* ---- GLMM ---- */

void rtb_fit_options_init(rtb_fit_options* options) {
  if (!options) return;
  options->nagq = 15;
  options->threads = 1;
  options->max_iterations = 500;
  options->paper_compatible_error_variance = 0;
}

rtb_status rtb_glmm_fit(const rtb_dataset* dataset, rtb_family family,
                        const rtb_fit_options* options, rtb_model** out) {
  if (!dataset || !out) return fail_null("dataset/out");
  return guarded([&] {
    rtb::FitOptions opt;
    if (options) {
      opt.nagq = options->nagq;
      opt.threads = options->threads;
      opt.max_iterations = options->max_iterations;
      opt.error_variance_mode = options->paper_compatible_error_variance
                                    ? rtb::ErrorVarianceMode::paper_compatible
                                    : rtb::ErrorVarianceMode::exact;
    }
    auto handle = std::make_unique<rtb_model>();
    handle->model = rtb::fit(dataset->data, to_family(family), opt);
    *out = handle.release();
  });
}

void rtb_model_free(rtb_model* model) { delete model; }

int rtb_model_converged(const rtb_model* model) {
  return model && model->model.converged ? 1 : 0;
}

int rtb_model_level_count(const rtb_model* model) {
  return model ? model->model.level_count() : 0;
}

int rtb_model_nagq(const rtb_model* model) { return model ? model->model.nagq : 0; }

rtb_status rtb_model_beta(const rtb_model* model, double* out) {
  if (!model || !out) return fail_null("model/out");
  std::memcpy(out, model->model.beta.data(),
              model->model.beta.size() * sizeof(double));
  return RTB_OK;
}

double rtb_model_tau2(const rtb_model* model) { return model->model.tau2; }

double rtb_model_dispersion(const rtb_model* model) {
  return model->model.dispersion;
}

double rtb_model_loglik(const rtb_model* model) { return model->model.loglik; }

double rtb_model_aic(const rtb_model* model) { return model->model.aic; }

rtb_status rtb_model_marginal_mean(const rtb_model* model, int level, double* out) {
  if (!model || !out) return fail_null("model/out");
  return guarded([&] { *out = rtb::marginal_mean(model->model, level); });
}

rtb_status rtb_model_marginal_variance(const rtb_model* model, int level,
                                       double* out) {
  if (!model || !out) return fail_null("model/out");
  return guarded([&] { *out = rtb::marginal_variance(model->model, level); });
}

rtb_status rtb_model_wald_ci(const rtb_model* model, int level, double confidence,
                             double* lower, double* upper, int* available) {
  if (!model || !lower || !upper || !available) {
    return fail_null("model/lower/upper/available");
  }
  return guarded([&] {
    const auto ci = rtb::wald_ci(model->model, level, confidence);
    *available = ci.has_value() ? 1 : 0;
    if (ci) {
      *lower = ci->lower;
      *upper = ci->upper;
    }
  });
}

rtb_status rtb_model_set_provenance(rtb_model* model, const char* response_label,
                                    uint64_t seed) {
  if (!model) return fail_null("model");
  model->model.response_label = response_label ? response_label : "";
  model->model.seed = seed;
  return RTB_OK;
}

const char* rtb_model_response_label(const rtb_model* model) {
  return model ? model->model.response_label.c_str() : nullptr;
}

rtb_status rtb_model_write_json(const rtb_model* model, const char* path) {
  if (!model || !path) return fail_null("model/path");
  return guarded([&] { rtb::write_json(model->model, std::filesystem::path(path)); });
}

rtb_status rtb_model_read_json(const char* path, rtb_model** out) {
  if (!path || !out) return fail_null("path/out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_model>();
    handle->model = rtb::read_glmm_json(path);
    *out = handle.release();
  });
}

/* ---- reconstruction ---- */

rtb_status rtb_reconstruct_ig(double mu, double sigma2, double* a, double* drift) {
  if (!a || !drift) return fail_null("a/drift");
  return guarded([&] {
    const auto [pos, rate] = rtb::reconstruct_ig(mu, sigma2);
    *a = pos;
    *drift = rate;
  });
}

rtb_status rtb_reconstruct_gamma(double mu, double sigma2, double* shape,
                                 double* scale) {
  if (!shape || !scale) return fail_null("shape/scale");
  return guarded([&] {
    const auto spec = rtb::reconstruct_gamma(mu, sigma2);
    const auto& start = std::get<rtb::GammaSumStart>(spec.start);
    *shape = start.shape;
    *scale = start.scale * start.scale * 2.0;  // back to the Gamma scale beta
  });
}

rtb_status rtb_model_reconstruct(const rtb_model* model, int level, double delta,
                                 rtb_reconstruction* out) {
  if (!model || !out) return fail_null("model/out");
  return guarded([&] {
    const auto rec = rtb::glmm_to_diffusion(model->model, level, delta);
    out->level = rec.level_id;
    out->family = from_family(rec.family);
    if (const auto* fixed = std::get_if<rtb::FixedStart>(&rec.diffusion.start)) {
      out->start_is_gamma_sum = 0;
      out->start_a = fixed->position;
      out->start_shape = 0.0;
      out->start_scale = 0.0;
    } else {
      const auto& gs = std::get<rtb::GammaSumStart>(rec.diffusion.start);
      out->start_is_gamma_sum = 1;
      out->start_a = 0.0;
      out->start_shape = gs.shape;
      out->start_scale = gs.scale;
    }
    out->drift = rec.diffusion.drift;
    out->delta = rec.diffusion.delta;
    out->implied_marginal = from_spec(rec.implied_marginal);
  });
}

rtb_status rtb_reconstruction_write_json(const rtb_reconstruction* rec,
                                         const char* response_label,
                                         const char* path) {
  if (!rec || !path) return fail_null("rec/path");
  return guarded([&] {
    rtb::CognitiveReconstruction full;
    full.level_id = rec->level;
    full.response_label = response_label ? response_label : "";
    full.family = to_family(rec->family);
    full.diffusion = to_diffusion(*rec);
    full.implied_marginal = to_spec(rec->implied_marginal);
    rtb::write_json(full, std::filesystem::path(path));
  });
}

/* ---- diffusion simulation ---- */

rtb_status rtb_fht_simulate(const rtb_reconstruction* rec, size_t reps,
                            uint64_t seed, int threads, rtb_fht** out) {
  if (!rec || !out) return fail_null("rec/out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_fht>();
    handle->sample = rtb::simulate_fht(to_diffusion(*rec), reps, seed, threads);
    *out = handle.release();
  });
}

rtb_status rtb_fht_simulate_ig_scheme(double mu_hat, double phi_hat, double delta,
                                      size_t reps, uint64_t seed, int threads,
                                      rtb_fht** out) {
  if (!out) return fail_null("out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_fht>();
    handle->sample =
        rtb::simulate_ig_scheme(mu_hat, phi_hat, delta, reps, seed, threads);
    *out = handle.release();
  });
}

rtb_status rtb_fht_simulate_gamma_scheme(double shape_hat, double scale_hat,
                                         double delta, size_t reps, uint64_t seed,
                                         int threads, rtb_fht** out) {
  if (!out) return fail_null("out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_fht>();
    handle->sample =
        rtb::simulate_gamma_scheme(shape_hat, scale_hat, delta, reps, seed, threads);
    *out = handle.release();
  });
}

void rtb_fht_free(rtb_fht* fht) { delete fht; }

size_t rtb_fht_count(const rtb_fht* fht) {
  return fht ? fht->sample.times.size() : 0;
}

size_t rtb_fht_truncated_count(const rtb_fht* fht) {
  return fht ? fht->sample.truncated_count : 0;
}

rtb_status rtb_fht_times(const rtb_fht* fht, double* out) {
  if (!fht || !out) return fail_null("fht/out");
  std::memcpy(out, fht->sample.times.data(),
              fht->sample.times.size() * sizeof(double));
  return RTB_OK;
}

rtb_status rtb_fht_write_csv(const rtb_fht* fht, const char* path) {
  if (!fht || !path) return fail_null("fht/path");
  return guarded([&] {
    std::ofstream os(path);
    rtb::require(os.good(), rtb::ErrorCode::io, "cannot write " + std::string(path));
    rtb::write_csv(fht->sample, os);
    os.flush();
    rtb::require(os.good(), rtb::ErrorCode::io,
                 "write failed for " + std::string(path));
  });
}

/* ---- goodness of fit ---- */

rtb_status rtb_gof_ks(const double* values, size_t n, const rtb_dist* dist,
                      double* statistic, double* pvalue) {
  if (!values || !dist || !statistic || !pvalue) {
    return fail_null("values/dist/statistic/pvalue");
  }
  return guarded([&] {
    const auto [d, p] =
        rtb::ks_test(std::span<const double>(values, n), to_spec(*dist));
    *statistic = d;
    *pvalue = p;
  });
}

rtb_status rtb_gof_report(const double* values, size_t n, const rtb_dist* dist,
                          int bins, rtb_gof** out) {
  if (!values || !dist || !out) return fail_null("values/dist/out");
  return guarded([&] {
    auto handle = std::make_unique<rtb_gof>();
    handle->report =
        rtb::gof_report(std::span<const double>(values, n), to_spec(*dist), bins);
    *out = handle.release();
  });
}

void rtb_gof_free(rtb_gof* gof) { delete gof; }

double rtb_gof_statistic(const rtb_gof* gof) { return gof->report.ks_statistic; }

double rtb_gof_pvalue(const rtb_gof* gof) { return gof->report.ks_pvalue; }

rtb_status rtb_gof_write_csv(const rtb_gof* gof, const char* dir) {
  if (!gof || !dir) return fail_null("gof/dir");
  return guarded([&] { rtb::write_csv(gof->report, std::filesystem::path(dir)); });
}

rtb_status rtb_gof_write_svg(const rtb_gof* gof, const char* title,
                             const char* path) {
  if (!gof || !path) return fail_null("gof/path");
  return guarded([&] {
    rtb::write_svg(gof->report, title ? title : "", std::filesystem::path(path));
  });
}

/* ---- mixture ---- */

rtb_status rtb_mixture_create(const rtb_dist* components, const double* weights,
                              size_t count, rtb_mixture** out) {
  if (!components || !weights || !out) return fail_null("components/weights/out");
  return guarded([&] {
    std::vector<std::string> labels;
    std::vector<rtb::DistributionSpec> specs;
    std::vector<double> w(weights, weights + count);
    for (size_t i = 0; i < count; ++i) {
      labels.push_back("component" + std::to_string(i + 1));
      specs.push_back(to_spec(components[i]));
    }
    auto handle = std::make_unique<rtb_mixture>();
    handle->model = rtb::make_mixture(std::move(labels), {std::move(specs)}, {std::move(w)});
    *out = handle.release();
  });
}

void rtb_mixture_free(rtb_mixture* mixture) { delete mixture; }

rtb_status rtb_mixture_cdf(const rtb_mixture* mixture, double y, double* out) {
  if (!mixture || !out) return fail_null("mixture/out");
  return guarded([&] { *out = rtb::mixture_cdf(mixture->model, 1, y); });
}

rtb_status rtb_mixture_quantile(const rtb_mixture* mixture, double p, double* out) {
  if (!mixture || !out) return fail_null("mixture/out");
  return guarded([&] { *out = rtb::mixture_quantile(mixture->model, 1, p); });
}

rtb_status rtb_mixture_sample(const rtb_mixture* mixture, size_t n, uint64_t seed,
                              double* out) {
  if (!mixture || !out) return fail_null("mixture/out");
  return guarded([&] {
    const auto draws = rtb::sample_mixture(mixture->model, 1, n, seed);
    std::memcpy(out, draws.data(), draws.size() * sizeof(double));
  });
}

}  // extern "C"
