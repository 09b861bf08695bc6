#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/distributions.hpp"
#include "core/ingest.hpp"

namespace rtb {

// Trials split by response label. Subsets are disjoint record-index sets;
// their union plus the dropped (missing-response) trials covers the dataset.
struct ResponsePartition {
  std::vector<std::string> labels;  // lexicographic
  std::vector<std::vector<std::size_t>> subsets;
  std::size_t dropped = 0;
};

ResponsePartition partition_by_response(const TrialDataset& dataset);

// Relative-frequency response probabilities per level. Raw frequencies, no
// smoothing: a label unseen at a level gets weight 0.
struct ResponseProbTable {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;  // [level][label]
  std::vector<std::vector<double>> probs;        // [level][label]
  // The frequency-consistency argument needs many subjects; flagged when
  // the dataset has fewer than 30.
  bool small_sample_warning = false;
};

ResponseProbTable response_probs(const ResponsePartition& partition,
                                 const TrialDataset& dataset);

void write_csv(const ResponseProbTable& table, std::ostream& os);

// Conditional dataset Y | response == label.
TrialDataset filter_by_response(const TrialDataset& dataset, const std::string& label);

// Law-of-total-probability mixture: per-level conditional distributions plus
// response-probability weights.
struct MixtureModel {
  std::vector<std::string> labels;
  std::vector<std::vector<DistributionSpec>> components;  // [level][label]
  std::vector<std::vector<double>> weights;               // [level][label]
};

MixtureModel make_mixture(std::vector<std::string> labels,
                          std::vector<std::vector<DistributionSpec>> components,
                          std::vector<std::vector<double>> weights);

double mixture_cdf(const MixtureModel& model, int level, double y);  // level 1-based
double mixture_quantile(const MixtureModel& model, int level, double p);
std::vector<double> sample_mixture(const MixtureModel& model, int level, std::size_t n,
                                   std::uint64_t seed);

}  // namespace rtb
