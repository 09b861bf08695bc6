#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "core/gof.hpp"
#include "core/textio.hpp"

namespace rtb {

namespace {

// Linear data->pixel mapping for one panel, with margins for axis labels.
struct Panel {
  double px, py, pw, ph;  // pixel rect of the plotting area
  double x0, x1, y0, y1;  // data range

  double sx(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double sy(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

std::string num(double v) {
  // Trim ticks like 0.30000000000000004 to a readable label.
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  const double scaled = span / (step * target);
  if (scaled >= 5.0) {
    step *= 5.0;
  } else if (scaled >= 2.0) {
    step *= 2.0;
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

class SvgOut {
 public:
  explicit SvgOut(std::ostringstream& os) : os_(os) {}

  void line(double x1, double y1, double x2, double y2, const char* stroke,
            double width = 1.0) {
    os_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
        << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << num(width) << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const char* fill,
            const char* stroke = "none") {
    os_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
        << "\"/>\n";
  }
  void circle(double x, double y, double r, const char* fill) {
    os_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
        << "\" fill=\"" << fill << "\"/>\n";
  }
  void text(double x, double y, const std::string& content, int size = 11,
            const char* anchor = "middle") {
    os_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << content
        << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke,
                double width = 1.5) {
    os_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << num(width) << "\" points=\"";
    for (const auto& [x, y] : pts) os_ << num(x) << ',' << num(y) << ' ';
    os_ << "\"/>\n";
  }

 private:
  std::ostringstream& os_;
};

void draw_axes(SvgOut& svg, const Panel& p, const std::string& title,
               const std::string& xlabel, const std::string& ylabel) {
  svg.rect(p.px, p.py, p.pw, p.ph, "white", "black");
  for (double t : nice_ticks(p.x0, p.x1)) {
    const double x = p.sx(t);
    svg.line(x, p.py + p.ph, x, p.py + p.ph + 4, "black");
    svg.text(x, p.py + p.ph + 16, num(t), 10);
  }
  for (double t : nice_ticks(p.y0, p.y1)) {
    const double y = p.sy(t);
    svg.line(p.px - 4, y, p.px, y, "black");
    svg.text(p.px - 7, y + 3, num(t), 10, "end");
  }
  svg.text(p.px + p.pw / 2, p.py - 8, title, 13);
  svg.text(p.px + p.pw / 2, p.py + p.ph + 32, xlabel, 11);
  svg.text(p.px - 48, p.py + p.ph / 2, ylabel, 11);
}

}  // namespace

std::string render_svg(const GofReport& report, const std::string& title) {
  constexpr double kWidth = 960.0;
  constexpr double kHeight = 760.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
     << "\">\n";
  SvgOut svg(os);
  svg.rect(0, 0, kWidth, kHeight, "white");
  svg.text(kWidth / 2, 24, title, 16);
  svg.text(kWidth / 2, 44,
           "KS statistic " + format_double(report.ks_statistic) + ", p-value " +
               format_double(report.ks_pvalue),
           12);

  const double panel_w = 360.0;
  const double panel_h = 270.0;
  const double col[2] = {90.0, 560.0};
  const double row[2] = {90.0, 440.0};

  // Density overlay.
  {
    const auto& d = report.density;
    double ymax = 0.0;
    for (double h : d.heights) ymax = std::max(ymax, h);
    for (double v : d.pdf) ymax = std::max(ymax, v);
    Panel p{col[0], row[0], panel_w, panel_h, d.edges.front(), d.edges.back(), 0.0,
            ymax * 1.05 + 1e-12};
    draw_axes(svg, p, "Estimated PDF", "reaction time (s)", "density");
    for (std::size_t b = 0; b < d.heights.size(); ++b) {
      const double x = p.sx(d.edges[b]);
      const double w = p.sx(d.edges[b + 1]) - x;
      const double y = p.sy(d.heights[b]);
      svg.rect(x, y, w, p.py + p.ph - y, "#c7d8ef", "#7a9cc4");
    }
    std::vector<std::pair<double, double>> curve;
    for (std::size_t b = 0; b < d.mids.size(); ++b) {
      curve.emplace_back(p.sx(d.mids[b]), p.sy(std::min(d.pdf[b], p.y1)));
    }
    svg.polyline(curve, "#1f4f9c", 2.0);
  }

  // CDF overlay.
  {
    const auto& c = report.cdf;
    Panel p{col[1], row[0], panel_w, panel_h, c.y.front(), c.y.back(), 0.0, 1.0};
    if (p.x1 <= p.x0) p.x1 = p.x0 + 1.0;
    draw_axes(svg, p, "Estimated CDF", "reaction time (s)", "probability");
    std::vector<std::pair<double, double>> steps;
    double prev = 0.0;
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      steps.emplace_back(p.sx(c.y[i]), p.sy(prev));
      steps.emplace_back(p.sx(c.y[i]), p.sy(c.ecdf[i]));
      prev = c.ecdf[i];
    }
    svg.polyline(steps, "#666666", 1.0);
    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      curve.emplace_back(p.sx(c.y[i]), p.sy(c.tcdf[i]));
    }
    svg.polyline(curve, "#1f4f9c", 2.0);
  }

  // Q-Q.
  {
    double lo = report.qq.front().first;
    double hi = lo;
    for (const auto& [t, e] : report.qq) {
      lo = std::min({lo, t, e});
      hi = std::max({hi, t, e});
    }
    Panel p{col[0], row[1], panel_w, panel_h, lo, hi, lo, hi};
    draw_axes(svg, p, "Q-Q plot", "theoretical quantiles", "sample quantiles");
    svg.line(p.sx(lo), p.sy(lo), p.sx(hi), p.sy(hi), "#999999");
    for (const auto& [t, e] : report.qq) {
      svg.circle(p.sx(t), p.sy(e), 1.8, "#1f4f9c");
    }
  }

  // P-P.
  {
    Panel p{col[1], row[1], panel_w, panel_h, 0.0, 1.0, 0.0, 1.0};
    draw_axes(svg, p, "P-P plot", "theoretical probabilities",
              "empirical probabilities");
    svg.line(p.sx(0.0), p.sy(0.0), p.sx(1.0), p.sy(1.0), "#999999");
    for (const auto& [t, e] : report.pp) {
      svg.circle(p.sx(t), p.sy(e), 1.8, "#1f4f9c");
    }
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace rtb
