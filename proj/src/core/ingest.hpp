#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "core/distributions.hpp"

namespace rtb {

// One reaction-time observation. An empty response string means the response
// is missing.
struct TrialRecord {
  std::string subject_id;
  int level_id = 0;  // 1..level_count
  int block = 0;
  std::string response;
  double rt_seconds = 0.0;
};

struct TrialDataset {
  std::vector<TrialRecord> records;
  int level_count = 0;    // declared number of combined stimulus levels
  int subject_count = 0;  // distinct subjects observed
  std::map<std::string, std::size_t> rejected;  // reason -> count

  std::size_t rejected_total() const;
};

// Parses columns subject_id,level_id,block,response,rt_seconds. Rows with a
// missing/non-numeric/nonpositive RT or an out-of-range level are rejected
// and tallied by reason, never silently dropped.
TrialDataset read_csv(const std::filesystem::path& path, int declared_level_count);
TrialDataset read_csv_stream(std::istream& is, int declared_level_count,
                             const std::string& origin);

void write_csv(const TrialDataset& dataset, std::ostream& os);
void write_csv(const TrialDataset& dataset, const std::filesystem::path& path);

struct DesignShape {
  int levels = 1;
  int subjects = 1;
  int reps = 1;  // trials per subject per level (blocks)
};

// Response-label model used when synthesizing data: P(label l | level i).
// A single row is broadcast to every level.
struct ResponseModel {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> level_probs;  // [level][label]

  static ResponseModel single(const std::string& label);
  static ResponseModel shared(std::vector<std::string> labels, std::vector<double> probs);
};

struct SynthesisTruth {
  std::vector<double> beta;  // log-scale cell means, one per level
  double tau2 = 0.0;
  Family family = Family::gamma;
  double dispersion = 1.0;
  ResponseModel responses = ResponseModel::single("r1");
};

// Draws C_k ~ N(0, tau2), sets mu = exp(beta_i + C_k), samples the RT from
// the family at dispersion phi and the label from the response model.
TrialDataset synthesize(const DesignShape& shape, const SynthesisTruth& truth,
                        std::uint64_t seed);

}  // namespace rtb
