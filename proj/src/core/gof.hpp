#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/distributions.hpp"

namespace rtb {

struct DensityOverlay {
  std::vector<double> edges;    // bins+1 edges
  std::vector<double> heights;  // unit-area histogram heights
  std::vector<double> mids;     // bin midpoints
  std::vector<double> pdf;      // theoretical density at the midpoints
};

struct CdfOverlay {
  std::vector<double> y;     // sorted sample
  std::vector<double> ecdf;  // i/n
  std::vector<double> tcdf;  // theoretical CDF at y
};

struct GofReport {
  double ks_statistic = 0.0;
  double ks_pvalue = 1.0;
  std::vector<std::pair<double, double>> qq;  // (theoretical quantile, order stat)
  std::vector<std::pair<double, double>> pp;  // (theoretical prob, plotting position)
  DensityOverlay density;
  CdfOverlay cdf;
};

// One-sample Kolmogorov-Smirnov: D and the asymptotic-series p-value.
std::pair<double, double> ks_test(std::span<const double> samp,
                                  const DistributionSpec& spec);

// Two-sample variant with the effective-n asymptotic p-value.
std::pair<double, double> ks_two_sample(std::span<const double> a,
                                        std::span<const double> b);

// Plotting positions (i - 0.5)/n throughout.
std::vector<std::pair<double, double>> qq_points(std::span<const double> samp,
                                                 const DistributionSpec& spec);
std::vector<std::pair<double, double>> pp_points(std::span<const double> samp,
                                                 const DistributionSpec& spec);

DensityOverlay density_overlay(std::span<const double> samp,
                               const DistributionSpec& spec, int bins);
CdfOverlay cdf_overlay(std::span<const double> samp, const DistributionSpec& spec);

GofReport gof_report(std::span<const double> samp, const DistributionSpec& spec,
                     int bins = 30);

// qq.csv, pp.csv, density.csv, cdf.csv in the given directory.
void write_csv(const GofReport& report, const std::filesystem::path& dir);

// Standalone four-panel SVG (density, CDF, Q-Q, P-P) with labeled axes.
std::string render_svg(const GofReport& report, const std::string& title);
void write_svg(const GofReport& report, const std::string& title,
               const std::filesystem::path& path);

}  // namespace rtb
