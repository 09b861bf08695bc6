#include "core/diffusion.hpp"

#include <cmath>
#include <ostream>

#include "core/distributions.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/textio.hpp"

namespace rtb {

namespace {

void check_positive(double v, const char* what) {
  require(std::isfinite(v) && v > 0.0, ErrorCode::parameter_domain,
          std::string(what) + " must be positive and finite");
}

double draw_start(const DiffusionSpec& spec, Rng& rng) {
  if (const auto* fixed = std::get_if<FixedStart>(&spec.start)) {
    return fixed->position;
  }
  const auto& gs = std::get<GammaSumStart>(spec.start);
  // Sum of two iid Gamma(shape, scale) == Gamma(2*shape, scale).
  return rng.gamma(2.0 * gs.shape, gs.scale);
}

}  // namespace

void validate(const DiffusionSpec& spec) {
  if (const auto* fixed = std::get_if<FixedStart>(&spec.start)) {
    check_positive(fixed->position, "fixed start position");
  } else {
    const auto& gs = std::get<GammaSumStart>(spec.start);
    check_positive(gs.shape, "start shape");
    check_positive(gs.scale, "start scale");
  }
  check_positive(spec.drift, "drift");
  check_positive(spec.delta, "delta");
  require(spec.theta == 0.0, ErrorCode::parameter_domain,
          "theta is fixed at 0 in this release");
}

double expected_start(const DiffusionSpec& spec) {
  if (const auto* fixed = std::get_if<FixedStart>(&spec.start)) {
    return fixed->position;
  }
  const auto& gs = std::get<GammaSumStart>(spec.start);
  return 2.0 * gs.shape * gs.scale;
}

std::size_t default_max_steps(const DiffusionSpec& spec) {
  // 50x the expected number of steps to absorption; positive drift makes the
  // expected hitting time finite, so this only guards pathological inputs.
  const double budget =
      std::ceil(50.0 * expected_start(spec) / (spec.drift * spec.delta));
  return static_cast<std::size_t>(std::max(budget, 1.0));
}

EulerResult euler_fht(const DiffusionSpec& spec, Rng& rng) {
  validate(spec);
  const std::size_t max_steps =
      spec.max_steps > 0 ? spec.max_steps : default_max_steps(spec);
  const double step_drift = spec.drift * spec.delta;
  const double step_sd = std::sqrt(spec.delta);
  double x = draw_start(spec, rng);
  for (std::size_t t = 1; t <= max_steps; ++t) {
    x += -step_drift + step_sd * rng.normal();
    if (x <= 0.0) {
      return {static_cast<double>(t) * spec.delta, false};
    }
  }
  return {0.0, true};
}

EulerResult euler_fht(const DiffusionSpec& spec, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 0);
  return euler_fht(spec, rng);
}

FhtSample simulate_fht(const DiffusionSpec& spec, std::size_t reps, std::uint64_t seed,
                       int threads) {
  validate(spec);
  require(reps >= 1, ErrorCode::empty_sample, "simulate_fht requires reps >= 1");
  std::vector<EulerResult> results(reps);
  parallel_chunks(reps, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::substream(seed, i);
      results[i] = euler_fht(spec, rng);
    }
  });
  FhtSample sample;
  sample.spec = spec;
  sample.seed = seed;
  sample.times.reserve(reps);
  sample.replicate_index.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    if (results[i].truncated) {
      ++sample.truncated_count;
    } else {
      sample.times.push_back(results[i].time);
      sample.replicate_index.push_back(i);
    }
  }
  return sample;
}

FhtSample simulate_ig_scheme(double mu_hat, double phi_hat, double delta,
                             std::size_t reps, std::uint64_t seed, int threads,
                             std::size_t max_steps) {
  check_positive(mu_hat, "mu_hat");
  check_positive(phi_hat, "phi_hat");
  const double root_inv_phi = std::sqrt(1.0 / phi_hat);
  DiffusionSpec spec;
  spec.start = FixedStart{root_inv_phi};
  spec.drift = root_inv_phi / mu_hat;
  spec.delta = delta;
  spec.max_steps = max_steps;
  FhtSample sample = simulate_fht(spec, reps, seed, threads);
  require(static_cast<double>(sample.truncated_count) <= 0.01 * static_cast<double>(reps),
          ErrorCode::excess_truncation,
          "simulate_ig_scheme: more than 1% of replicates hit the step budget");
  return sample;
}

FhtSample simulate_gamma_scheme(double shape_hat, double scale_hat, double delta,
                                std::size_t reps, std::uint64_t seed, int threads,
                                std::size_t max_steps) {
  check_positive(shape_hat, "shape_hat");
  check_positive(scale_hat, "scale_hat");
  const double start_scale = std::sqrt(scale_hat / 2.0);
  DiffusionSpec spec;
  spec.start = GammaSumStart{shape_hat, start_scale};
  spec.drift = 1.0 / start_scale;
  spec.delta = delta;
  spec.max_steps = max_steps;
  return simulate_fht(spec, reps, seed, threads);
}

std::vector<double> exact_ig_fht(double a, double drift, std::size_t n,
                                 std::uint64_t seed) {
  check_positive(a, "a");
  check_positive(drift, "drift");
  const double mean = a / drift;
  const double variance = a / (drift * drift * drift);
  return sample(DistributionSpec::from_moments(Family::inverse_gaussian, mean, variance),
                n, seed);
}

void write_csv(const FhtSample& sample, std::ostream& os) {
  os << "replicate_index,hitting_time_seconds\n";
  for (std::size_t i = 0; i < sample.times.size(); ++i) {
    os << sample.replicate_index[i] << ',' << format_double(sample.times[i]) << '\n';
  }
}

}  // namespace rtb
