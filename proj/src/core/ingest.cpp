#include "core/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/textio.hpp"

namespace rtb {

namespace {

constexpr const char* kHeader = "subject_id,level_id,block,response,rt_seconds";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

bool parse_int(const std::string& s, int& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc{} && res.ptr == e && !s.empty();
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc{} && res.ptr == e && !s.empty();
}

int count_subjects(const std::vector<TrialRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.subject_id);
  return static_cast<int>(ids.size());
}

}  // namespace

std::size_t TrialDataset::rejected_total() const {
  std::size_t total = 0;
  for (const auto& [reason, count] : rejected) total += count;
  return total;
}

TrialDataset read_csv_stream(std::istream& is, int declared_level_count,
                             const std::string& origin) {
  require(declared_level_count >= 1, ErrorCode::schema,
          "declared level count must be >= 1");
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::schema,
          origin + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kHeader, ErrorCode::schema,
          origin + ": header must be exactly '" + kHeader + "'");

  TrialDataset ds;
  ds.level_count = declared_level_count;
  while (std::getline(is, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      ++ds.rejected["bad_field_count"];
      continue;
    }
    TrialRecord rec;
    rec.subject_id = fields[0];
    if (!parse_int(fields[1], rec.level_id)) {
      ++ds.rejected["non_numeric_level"];
      continue;
    }
    if (rec.level_id < 1 || rec.level_id > declared_level_count) {
      ++ds.rejected["out_of_range_level"];
      continue;
    }
    if (!parse_int(fields[2], rec.block)) {
      ++ds.rejected["non_numeric_block"];
      continue;
    }
    rec.response = fields[3];
    if (fields[4].empty()) {
      ++ds.rejected["missing_rt"];
      continue;
    }
    if (!parse_double(fields[4], rec.rt_seconds) || !std::isfinite(rec.rt_seconds)) {
      ++ds.rejected["non_numeric_rt"];
      continue;
    }
    if (rec.rt_seconds <= 0.0) {
      ++ds.rejected["nonpositive_rt"];
      continue;
    }
    ds.records.push_back(std::move(rec));
  }
  ds.subject_count = count_subjects(ds.records);
  return ds;
}

TrialDataset read_csv(const std::filesystem::path& path, int declared_level_count) {
  std::ifstream is(path);
  require(is.good(), ErrorCode::io, "cannot open " + path.string());
  return read_csv_stream(is, declared_level_count, path.string());
}

void write_csv(const TrialDataset& dataset, std::ostream& os) {
  os << kHeader << '\n';
  for (const auto& r : dataset.records) {
    os << r.subject_id << ',' << r.level_id << ',' << r.block << ',' << r.response
       << ',' << format_double(r.rt_seconds) << '\n';
  }
}

void write_csv(const TrialDataset& dataset, const std::filesystem::path& path) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io, "cannot write " + path.string());
  write_csv(dataset, os);
  os.flush();
  require(os.good(), ErrorCode::io, "write failed for " + path.string());
}

ResponseModel ResponseModel::single(const std::string& label) {
  return ResponseModel{{label}, {{1.0}}};
}

ResponseModel ResponseModel::shared(std::vector<std::string> labels,
                                    std::vector<double> probs) {
  require(labels.size() == probs.size() && !labels.empty(), ErrorCode::parameter_domain,
          "response model needs one probability per label");
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  require(std::abs(total - 1.0) < 1e-9, ErrorCode::parameter_domain,
          "response probabilities must sum to 1");
  return ResponseModel{std::move(labels), {std::move(probs)}};
}

TrialDataset synthesize(const DesignShape& shape, const SynthesisTruth& truth,
                        std::uint64_t seed) {
  require(shape.levels >= 1 && shape.subjects >= 1 && shape.reps >= 1,
          ErrorCode::parameter_domain, "design shape must be positive");
  require(static_cast<int>(truth.beta.size()) == shape.levels,
          ErrorCode::parameter_domain, "truth.beta must have one entry per level");
  require(truth.tau2 >= 0.0 && std::isfinite(truth.tau2), ErrorCode::parameter_domain,
          "tau2 must be >= 0");
  require(truth.dispersion > 0.0, ErrorCode::parameter_domain,
          "dispersion must be positive");
  const auto& rm = truth.responses;
  require(!rm.labels.empty(), ErrorCode::parameter_domain, "response model is empty");
  require(rm.level_probs.size() == 1 ||
              rm.level_probs.size() == static_cast<std::size_t>(shape.levels),
          ErrorCode::parameter_domain,
          "response model must give one probability row or one per level");

  TrialDataset ds;
  ds.level_count = shape.levels;
  ds.records.reserve(static_cast<std::size_t>(shape.levels) * shape.subjects * shape.reps);

  const double tau = std::sqrt(truth.tau2);
  for (int k = 0; k < shape.subjects; ++k) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(k));
    const double intercept = tau > 0.0 ? tau * rng.normal() : 0.0;
    std::string subject = "s" + std::to_string(k + 1);
    for (int i = 0; i < shape.levels; ++i) {
      const double mu = std::exp(truth.beta[static_cast<std::size_t>(i)] + intercept);
      const DistributionSpec cond =
          truth.family == Family::inverse_gaussian
              ? DistributionSpec::inverse_gaussian(mu, truth.dispersion)
              : DistributionSpec::gamma(1.0 / truth.dispersion, truth.dispersion * mu);
      const auto& probs =
          rm.level_probs.size() == 1 ? rm.level_probs[0]
                                     : rm.level_probs[static_cast<std::size_t>(i)];
      for (int j = 0; j < shape.reps; ++j) {
        TrialRecord rec;
        rec.subject_id = subject;
        rec.level_id = i + 1;
        rec.block = j + 1;
        rec.rt_seconds = sample_one(cond, rng);
        double u = rng.uniform();
        std::size_t label = 0;
        while (label + 1 < probs.size() && u > probs[label]) {
          u -= probs[label];
          ++label;
        }
        rec.response = rm.labels[label];
        ds.records.push_back(std::move(rec));
      }
    }
  }
  ds.subject_count = shape.subjects;
  return ds;
}

}  // namespace rtb
