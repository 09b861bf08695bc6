#include "core/gof.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/errors.hpp"
#include "core/special.hpp"
#include "core/textio.hpp"

namespace rtb {

namespace {

std::vector<double> sorted_copy(std::span<const double> samp) {
  require(!samp.empty(), ErrorCode::domain, "sample must be non-empty");
  std::vector<double> s(samp.begin(), samp.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::pair<double, double> ks_test(std::span<const double> samp,
                                  const DistributionSpec& spec) {
  const auto s = sorted_copy(samp);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(spec, s[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return {d, special::kolmogorov_sf(std::sqrt(n) * d)};
}

std::pair<double, double> ks_two_sample(std::span<const double> a,
                                        std::span<const double> b) {
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  const double effective = std::sqrt(na * nb / (na + nb));
  return {d, special::kolmogorov_sf(effective * d)};
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> samp,
                                                 const DistributionSpec& spec) {
  const auto s = sorted_copy(samp);
  const double n = static_cast<double>(s.size());
  std::vector<std::pair<double, double>> points(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    points[i] = {quantile(spec, p), s[i]};
  }
  return points;
}

std::vector<std::pair<double, double>> pp_points(std::span<const double> samp,
                                                 const DistributionSpec& spec) {
  const auto s = sorted_copy(samp);
  const double n = static_cast<double>(s.size());
  std::vector<std::pair<double, double>> points(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    points[i] = {cdf(spec, s[i]), (static_cast<double>(i) + 0.5) / n};
  }
  return points;
}

DensityOverlay density_overlay(std::span<const double> samp,
                               const DistributionSpec& spec, int bins) {
  require(bins >= 1, ErrorCode::domain, "density_overlay requires bins >= 1");
  const auto s = sorted_copy(samp);
  double lo = s.front();
  double hi = s.back();
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  DensityOverlay overlay;
  overlay.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) overlay.edges[static_cast<std::size_t>(b)] = lo + b * width;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : s) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
  }
  overlay.heights.resize(counts.size());
  overlay.mids.resize(counts.size());
  overlay.pdf.resize(counts.size());
  const double n = static_cast<double>(s.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    overlay.heights[b] = static_cast<double>(counts[b]) / (n * width);
    overlay.mids[b] = lo + (static_cast<double>(b) + 0.5) * width;
    overlay.pdf[b] = pdf(spec, std::max(overlay.mids[b], 0.0));
  }
  return overlay;
}

CdfOverlay cdf_overlay(std::span<const double> samp, const DistributionSpec& spec) {
  CdfOverlay overlay;
  overlay.y = sorted_copy(samp);
  const double n = static_cast<double>(overlay.y.size());
  overlay.ecdf.resize(overlay.y.size());
  overlay.tcdf.resize(overlay.y.size());
  for (std::size_t i = 0; i < overlay.y.size(); ++i) {
    overlay.ecdf[i] = (static_cast<double>(i) + 1.0) / n;
    overlay.tcdf[i] = cdf(spec, overlay.y[i]);
  }
  return overlay;
}

GofReport gof_report(std::span<const double> samp, const DistributionSpec& spec,
                     int bins) {
  GofReport report;
  const auto [stat, pvalue] = ks_test(samp, spec);
  report.ks_statistic = stat;
  report.ks_pvalue = pvalue;
  report.qq = qq_points(samp, spec);
  report.pp = pp_points(samp, spec);
  report.density = density_overlay(samp, spec, bins);
  report.cdf = cdf_overlay(samp, spec);
  return report;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io, "cannot write " + path.string());
  return os;
}

}  // namespace

void write_csv(const GofReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto os = open_out(dir / "qq.csv");
    os << "theoretical_quantile,sample_quantile\n";
    for (const auto& [t, e] : report.qq) {
      os << format_double(t) << ',' << format_double(e) << '\n';
    }
  }
  {
    auto os = open_out(dir / "pp.csv");
    os << "theoretical_probability,empirical_probability\n";
    for (const auto& [t, e] : report.pp) {
      os << format_double(t) << ',' << format_double(e) << '\n';
    }
  }
  {
    auto os = open_out(dir / "density.csv");
    os << "bin_left,bin_right,histogram_density,theoretical_pdf_at_mid\n";
    for (std::size_t b = 0; b < report.density.heights.size(); ++b) {
      os << format_double(report.density.edges[b]) << ','
         << format_double(report.density.edges[b + 1]) << ','
         << format_double(report.density.heights[b]) << ','
         << format_double(report.density.pdf[b]) << '\n';
    }
  }
  {
    auto os = open_out(dir / "cdf.csv");
    os << "y,empirical_cdf,theoretical_cdf\n";
    for (std::size_t i = 0; i < report.cdf.y.size(); ++i) {
      os << format_double(report.cdf.y[i]) << ',' << format_double(report.cdf.ecdf[i])
         << ',' << format_double(report.cdf.tcdf[i]) << '\n';
    }
  }
}

void write_svg(const GofReport& report, const std::string& title,
               const std::filesystem::path& path) {
  auto os = open_out(path);
  os << render_svg(report, title);
  os.flush();
  require(os.good(), ErrorCode::io, "write failed for " + path.string());
}

}  // namespace rtb
