/* rtbridge: reaction-time modeling via conditional GLMMs and one-barrier
 * diffusion first-hitting times.
 *
 * C interface over the C++ core: opaque handles, status codes, and a
 * thread-local error message. Every function that can fail returns
 * rtb_status; on failure rtb_last_error() describes what went wrong.
 * Handles are created by rtb_*_read/_fit/_simulate/_create functions and
 * released with the matching rtb_*_free. */

#ifndef RTBRIDGE_H
#define RTBRIDGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtb_status {
  RTB_OK = 0,
  RTB_E_DOMAIN = 1,      /* parameter or argument outside its domain */
  RTB_E_DATA = 2,        /* dataset, design, or sample deficiency */
  RTB_E_SCHEMA = 3,      /* malformed file contents */
  RTB_E_IO = 4,          /* unreadable or unwritable file */
  RTB_E_CONVERGENCE = 5, /* operation refused on a non-converged model */
  RTB_E_INTERNAL = 6
} rtb_status;

/* Message for the most recent failure on this thread. */
const char* rtb_last_error(void);
const char* rtb_version(void);

typedef enum rtb_family {
  RTB_FAMILY_INVERSE_GAUSSIAN = 0,
  RTB_FAMILY_GAMMA = 1
} rtb_family;

/* IG: p1 = mean mu, p2 = dispersion phi (variance = phi mu^3).
 * Gamma: p1 = shape, p2 = scale (variance = shape scale^2). */
typedef struct rtb_dist {
  rtb_family family;
  double p1;
  double p2;
} rtb_dist;

/* ---- distribution kernels ---- */

rtb_status rtb_dist_pdf(const rtb_dist* dist, double y, double* out);
rtb_status rtb_dist_cdf(const rtb_dist* dist, double y, double* out);
rtb_status rtb_dist_quantile(const rtb_dist* dist, double p, double* out);
rtb_status rtb_dist_moments(const rtb_dist* dist, double* mean, double* variance);
/* n deterministic draws into out[0..n). */
rtb_status rtb_dist_sample(const rtb_dist* dist, size_t n, uint64_t seed, double* out);
/* Maximum-likelihood marginal fit of one family. */
rtb_status rtb_dist_fit(const double* values, size_t n, rtb_family family,
                        rtb_dist* out);

/* ---- trial datasets ---- */

typedef struct rtb_dataset rtb_dataset;

/* CSV schema: header subject_id,level_id,block,response,rt_seconds; empty
 * response field = missing. Bad rows are rejected and tallied, never
 * silently dropped. */
rtb_status rtb_dataset_read_csv(const char* path, int level_count, rtb_dataset** out);
rtb_status rtb_dataset_write_csv(const rtb_dataset* dataset, const char* path);
void rtb_dataset_free(rtb_dataset* dataset);

int rtb_dataset_level_count(const rtb_dataset* dataset);
int rtb_dataset_subject_count(const rtb_dataset* dataset);
size_t rtb_dataset_trial_count(const rtb_dataset* dataset);
size_t rtb_dataset_rejected_count(const rtb_dataset* dataset);
size_t rtb_dataset_dropped_count(const rtb_dataset* dataset);

/* Distinct response labels, lexicographic. The returned pointer stays valid
 * until the dataset is freed. */
size_t rtb_dataset_label_count(const rtb_dataset* dataset);
const char* rtb_dataset_label(const rtb_dataset* dataset, size_t index);

/* Conditional subset Y | response == label. */
rtb_status rtb_dataset_filter_response(const rtb_dataset* dataset, const char* label,
                                       rtb_dataset** out);

/* Relative-frequency response probabilities for one level (1-based), in
 * label order; out must hold rtb_dataset_label_count values. */
rtb_status rtb_dataset_response_probs(const rtb_dataset* dataset, int level,
                                      double* out);

/* CSV with header level_id,label,count,probability. small_sample_warning
 * (may be NULL) is set when the dataset has fewer than 30 subjects. */
rtb_status rtb_dataset_write_response_table(const rtb_dataset* dataset,
                                            const char* path,
                                            int* small_sample_warning);

/* Synthetic data: C_k ~ N(0, tau2), mu = exp(beta_i + C_k), RT from the
 * family at the given dispersion, labels drawn with the shared
 * probabilities. labels may be NULL (single label "r1"). */
typedef struct rtb_synth_truth {
  const double* beta; /* one log-scale cell mean per level */
  double tau2;
  rtb_family family;
  double dispersion;
  const char* const* labels;
  const double* label_probs;
  size_t label_count;
} rtb_synth_truth;

rtb_status rtb_dataset_synthesize(int levels, int subjects, int reps,
                                  const rtb_synth_truth* truth, uint64_t seed,
                                  rtb_dataset** out);

/* ---- conditional GLMM ---- */

typedef struct rtb_model rtb_model;

typedef struct rtb_fit_options {
  int nagq;           /* adaptive Gauss-Hermite nodes; 1 = Laplace */
  int threads;
  int max_iterations;
  int paper_compatible_error_variance; /* 0 = exact per-level mode */
} rtb_fit_options;

void rtb_fit_options_init(rtb_fit_options* options);

/* ML fit with log link, cell-means fixed effects, and one normal random
 * intercept per subject. Optimizer non-convergence is not an error; check
 * rtb_model_converged. */
rtb_status rtb_glmm_fit(const rtb_dataset* dataset, rtb_family family,
                        const rtb_fit_options* options, rtb_model** out);
void rtb_model_free(rtb_model* model);

int rtb_model_converged(const rtb_model* model);
int rtb_model_level_count(const rtb_model* model);
int rtb_model_nagq(const rtb_model* model);
rtb_status rtb_model_beta(const rtb_model* model, double* out);
double rtb_model_tau2(const rtb_model* model);
double rtb_model_dispersion(const rtb_model* model);
double rtb_model_loglik(const rtb_model* model);
double rtb_model_aic(const rtb_model* model);

rtb_status rtb_model_marginal_mean(const rtb_model* model, int level, double* out);
rtb_status rtb_model_marginal_variance(const rtb_model* model, int level, double* out);

/* available is 0 when the coefficient's standard error could not be
 * computed; lower/upper are untouched in that case. */
rtb_status rtb_model_wald_ci(const rtb_model* model, int level, double confidence,
                             double* lower, double* upper, int* available);

/* Provenance recorded into the model JSON (response label, run seed). */
rtb_status rtb_model_set_provenance(rtb_model* model, const char* response_label,
                                    uint64_t seed);
const char* rtb_model_response_label(const rtb_model* model);

rtb_status rtb_model_write_json(const rtb_model* model, const char* path);
rtb_status rtb_model_read_json(const char* path, rtb_model** out);

/* ---- diffusion reconstruction and simulation ---- */

typedef struct rtb_reconstruction {
  int level;
  rtb_family family;
  int start_is_gamma_sum; /* 0: fixed start at start_a; 1: Gamma-sum start */
  double start_a;
  double start_shape;
  double start_scale;
  double drift;
  double delta;
  rtb_dist implied_marginal;
} rtb_reconstruction;

/* drift = sqrt(mu/sigma2), a = mu*drift; exact round trip. */
rtb_status rtb_reconstruct_ig(double mu, double sigma2, double* a, double* drift);
/* shape = mu^2/sigma2, scale = sigma2/mu. */
rtb_status rtb_reconstruct_gamma(double mu, double sigma2, double* shape,
                                 double* scale);

/* Marginal moments of the fitted level mapped to the family's diffusion. */
rtb_status rtb_model_reconstruct(const rtb_model* model, int level, double delta,
                                 rtb_reconstruction* out);
rtb_status rtb_reconstruction_write_json(const rtb_reconstruction* rec,
                                         const char* response_label,
                                         const char* path);

typedef struct rtb_fht rtb_fht;

/* Euler first-hitting times for the reconstructed diffusion; replicate i
 * always uses the substream derived from (seed, i), so results do not
 * depend on the thread count. */
rtb_status rtb_fht_simulate(const rtb_reconstruction* rec, size_t reps,
                            uint64_t seed, int threads, rtb_fht** out);
rtb_status rtb_fht_simulate_ig_scheme(double mu_hat, double phi_hat, double delta,
                                      size_t reps, uint64_t seed, int threads,
                                      rtb_fht** out);
rtb_status rtb_fht_simulate_gamma_scheme(double shape_hat, double scale_hat,
                                         double delta, size_t reps, uint64_t seed,
                                         int threads, rtb_fht** out);
void rtb_fht_free(rtb_fht* fht);
size_t rtb_fht_count(const rtb_fht* fht);
size_t rtb_fht_truncated_count(const rtb_fht* fht);
rtb_status rtb_fht_times(const rtb_fht* fht, double* out);
/* CSV with header replicate_index,hitting_time_seconds. */
rtb_status rtb_fht_write_csv(const rtb_fht* fht, const char* path);

/* ---- goodness of fit ---- */

typedef struct rtb_gof rtb_gof;

rtb_status rtb_gof_ks(const double* values, size_t n, const rtb_dist* dist,
                      double* statistic, double* pvalue);
rtb_status rtb_gof_report(const double* values, size_t n, const rtb_dist* dist,
                          int bins, rtb_gof** out);
void rtb_gof_free(rtb_gof* gof);
double rtb_gof_statistic(const rtb_gof* gof);
double rtb_gof_pvalue(const rtb_gof* gof);
/* qq.csv, pp.csv, density.csv, cdf.csv under dir. */
rtb_status rtb_gof_write_csv(const rtb_gof* gof, const char* dir);
/* Four-panel SVG: density, CDF, Q-Q, P-P. */
rtb_status rtb_gof_write_svg(const rtb_gof* gof, const char* title, const char* path);

/* ---- law-of-total-probability mixture (one level) ---- */

typedef struct rtb_mixture rtb_mixture;

/* weights must be nonnegative and sum to 1 within 1e-12. */
rtb_status rtb_mixture_create(const rtb_dist* components, const double* weights,
                              size_t count, rtb_mixture** out);
void rtb_mixture_free(rtb_mixture* mixture);
rtb_status rtb_mixture_cdf(const rtb_mixture* mixture, double y, double* out);
rtb_status rtb_mixture_quantile(const rtb_mixture* mixture, double p, double* out);
rtb_status rtb_mixture_sample(const rtb_mixture* mixture, size_t n, uint64_t seed,
                              double* out);

#ifdef __cplusplus
}
#endif

#endif /* RTBRIDGE_H */
