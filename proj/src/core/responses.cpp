#include "core/responses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "core/errors.hpp"
#include "core/rootfind.hpp"
#include "core/textio.hpp"

namespace rtb {

ResponsePartition partition_by_response(const TrialDataset& dataset) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < dataset.records.size(); ++r) {
    const auto& rec = dataset.records[r];
    if (rec.response.empty()) {
      ++dropped;
    } else {
      by_label[rec.response].push_back(r);
    }
  }
  require(!by_label.empty(), ErrorCode::empty_partition,
          "every trial is missing its response");
  ResponsePartition partition;
  partition.dropped = dropped;
  for (auto& [label, subset] : by_label) {
    partition.labels.push_back(label);
    partition.subsets.push_back(std::move(subset));
  }
  return partition;
}

ResponseProbTable response_probs(const ResponsePartition& partition,
                                 const TrialDataset& dataset) {
  const std::size_t levels = static_cast<std::size_t>(dataset.level_count);
  const std::size_t label_count = partition.labels.size();
  ResponseProbTable table;
  table.labels = partition.labels;
  table.counts.assign(levels, std::vector<std::size_t>(label_count, 0));
  table.probs.assign(levels, std::vector<double>(label_count, 0.0));
  table.small_sample_warning = dataset.subject_count < 30;

  for (std::size_t l = 0; l < label_count; ++l) {
    for (std::size_t r : partition.subsets[l]) {
      const int level = dataset.records[r].level_id;
      ++table.counts[static_cast<std::size_t>(level - 1)][l];
    }
  }
  for (std::size_t i = 0; i < levels; ++i) {
    std::size_t total = 0;
    for (std::size_t l = 0; l < label_count; ++l) total += table.counts[i][l];
    require(total > 0, ErrorCode::undefined_probability,
            "level " + std::to_string(i + 1) + " has no non-dropped trials");
    for (std::size_t l = 0; l < label_count; ++l) {
      table.probs[i][l] =
          static_cast<double>(table.counts[i][l]) / static_cast<double>(total);
    }
  }
  return table;
}

void write_csv(const ResponseProbTable& table, std::ostream& os) {
  os << "level_id,label,count,probability\n";
  for (std::size_t i = 0; i < table.probs.size(); ++i) {
    for (std::size_t l = 0; l < table.labels.size(); ++l) {
      os << (i + 1) << ',' << table.labels[l] << ',' << table.counts[i][l] << ','
         << format_double(table.probs[i][l]) << '\n';
    }
  }
}

TrialDataset filter_by_response(const TrialDataset& dataset, const std::string& label) {
  require(!label.empty(), ErrorCode::domain, "response label must be non-empty");
  TrialDataset out;
  out.level_count = dataset.level_count;
  for (const auto& rec : dataset.records) {
    if (rec.response == label) out.records.push_back(rec);
  }
  require(!out.records.empty(), ErrorCode::domain,
          "no trials carry response label '" + label + "'");
  std::map<std::string, int> subjects;
  for (const auto& rec : out.records) subjects.try_emplace(rec.subject_id, 0);
  out.subject_count = static_cast<int>(subjects.size());
  return out;
}

MixtureModel make_mixture(std::vector<std::string> labels,
                          std::vector<std::vector<DistributionSpec>> components,
                          std::vector<std::vector<double>> weights) {
  require(!labels.empty(), ErrorCode::domain, "mixture needs at least one label");
  require(components.size() == weights.size() && !components.empty(),
          ErrorCode::domain, "mixture needs matching component/weight rows");
  for (std::size_t i = 0; i < components.size(); ++i) {
    require(components[i].size() == labels.size() && weights[i].size() == labels.size(),
            ErrorCode::domain, "mixture row width must match the label count");
    double total = 0.0;
    for (double w : weights[i]) {
      require(w >= 0.0 && std::isfinite(w), ErrorCode::domain,
              "mixture weights must be nonnegative");
      total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::domain,
            "mixture weights at level " + std::to_string(i + 1) +
                " must sum to 1 within 1e-12");
  }
  return MixtureModel{std::move(labels), std::move(components), std::move(weights)};
}

double mixture_cdf(const MixtureModel& model, int level, double y) {
  require(level >= 1 && level <= static_cast<int>(model.weights.size()),
          ErrorCode::domain, "level out of range");
  const std::size_t i = static_cast<std::size_t>(level - 1);
  double acc = 0.0;
  for (std::size_t l = 0; l < model.weights[i].size(); ++l) {
    const double w = model.weights[i][l];
    if (w > 0.0) acc += w * cdf(model.components[i][l], y);
  }
  return acc;
}

double mixture_quantile(const MixtureModel& model, int level, double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::domain, "quantile requires p in (0,1)");
  const std::size_t i = static_cast<std::size_t>(level - 1);
  double lo = std::numeric_limits<double>::max();
  double hi = 0.0;
  for (std::size_t l = 0; l < model.weights[i].size(); ++l) {
    if (model.weights[i][l] > 0.0) {
      lo = std::min(lo, quantile(model.components[i][l], p));
      hi = std::max(hi, quantile(model.components[i][l], p));
    }
  }
  if (hi <= lo) return lo;
  return find_root([&](double y) { return mixture_cdf(model, level, y) - p; }, lo, hi,
                   1e-12);
}

std::vector<double> sample_mixture(const MixtureModel& model, int level, std::size_t n,
                                   std::uint64_t seed) {
  require(n >= 1, ErrorCode::empty_sample, "sample_mixture requires n >= 1");
  require(level >= 1 && level <= static_cast<int>(model.weights.size()),
          ErrorCode::domain, "level out of range");
  const std::size_t i = static_cast<std::size_t>(level - 1);
  Rng rng(mix64(seed));
  std::vector<double> out(n);
  for (double& v : out) {
    double u = rng.uniform();
    std::size_t l = 0;
    while (l + 1 < model.weights[i].size() && u > model.weights[i][l]) {
      u -= model.weights[i][l];
      ++l;
    }
    v = sample_one(model.components[i][l], rng);
  }
  return out;
}

}  // namespace rtb
