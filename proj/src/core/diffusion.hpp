#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace rtb {

// Deterministic starting state X_0 = position.
struct FixedStart {
  double position;
};

// X_0 drawn per replicate as the sum of two independent Gamma(shape, scale)
// variables (equivalently one Gamma(2*shape, scale) draw).
struct GammaSumStart {
  double shape;
  double scale;
};

using StartSpec = std::variant<FixedStart, GammaSumStart>;

// One-barrier diffusion toward 0: X_t = X_0 - drift*t + W_t, discretized with
// Euler steps of size delta. theta (non-decision offset) is carried but fixed
// at 0 in this release.
struct DiffusionSpec {
  StartSpec start;
  double drift = 1.0;
  double theta = 0.0;
  double delta = 0.01;
  std::size_t max_steps = 0;  // 0 = default budget, see default_max_steps()
};

void validate(const DiffusionSpec& spec);
double expected_start(const DiffusionSpec& spec);
std::size_t default_max_steps(const DiffusionSpec& spec);

struct EulerResult {
  double time = 0.0;      // t* * delta when not truncated
  bool truncated = false;
};

// First Euler step t* with X <= 0; consumes the replicate's own stream.
EulerResult euler_fht(const DiffusionSpec& spec, Rng& rng);
EulerResult euler_fht(const DiffusionSpec& spec, std::uint64_t seed);

struct FhtSample {
  std::vector<double> times;              // surviving replicates, replicate order
  std::vector<std::size_t> replicate_index;  // same length as times
  DiffusionSpec spec;
  std::uint64_t seed = 0;
  std::size_t truncated_count = 0;
};

FhtSample simulate_fht(const DiffusionSpec& spec, std::size_t reps, std::uint64_t seed,
                       int threads = 1);

// Scheme for IG-distributed responses: X_0 = sqrt(1/phi_hat),
// drift = (1/mu_hat) * sqrt(1/phi_hat). Fails if more than 1% of replicates
// hit the step budget. max_steps = 0 uses the default budget.
FhtSample simulate_ig_scheme(double mu_hat, double phi_hat, double delta,
                             std::size_t reps, std::uint64_t seed, int threads = 1,
                             std::size_t max_steps = 0);

// Scheme for Gamma-distributed responses: X_0 is the sum of two independent
// Gamma(shape_hat, sqrt(scale_hat/2)) draws, drift = 1/sqrt(scale_hat/2).
FhtSample simulate_gamma_scheme(double shape_hat, double scale_hat, double delta,
                                std::size_t reps, std::uint64_t seed, int threads = 1,
                                std::size_t max_steps = 0);

// Exact draws from the hitting law of the fixed-start diffusion,
// IG(mean a/drift, variance a/drift^3). Oracle for the Euler scheme.
std::vector<double> exact_ig_fht(double a, double drift, std::size_t n,
                                 std::uint64_t seed);

// CSV with header replicate_index,hitting_time_seconds.
void write_csv(const FhtSample& sample, std::ostream& os);

}  // namespace rtb
