#include "savopt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace savopt {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (k, f), finite only
};

}  // namespace

void render_plot(const std::vector<std::pair<std::string, Trace>>& traces,
                 const std::string& path) {
  std::vector<Series> series;
  double fmax = -std::numeric_limits<double>::infinity();
  double fmin_pos = std::numeric_limits<double>::infinity();
  double kmax = 1.0;
  for (const auto& [label, trace] : traces) {
    Series s;
    s.label = label;
    for (const TraceRecord& rec : trace) {
      if (!std::isfinite(rec.f)) break;  // clip at the last finite value
      s.points.emplace_back(static_cast<double>(rec.k), rec.f);
      fmax = std::max(fmax, rec.f);
      if (rec.f > 0) fmin_pos = std::min(fmin_pos, rec.f);
      kmax = std::max(kmax, static_cast<double>(rec.k));
    }
    series.push_back(std::move(s));
  }
  if (!std::isfinite(fmax) || fmax <= 0) fmax = 1.0;
  if (!std::isfinite(fmin_pos)) fmin_pos = fmax * 1e-6;
  // Floor for zero/negative losses so they stay drawable on the log axis.
  const double floor = std::max(fmin_pos * 1e-2, fmax * 1e-18);
  const double ylog_lo = std::log10(floor);
  const double ylog_hi = std::log10(fmax) + 0.05 * std::abs(std::log10(fmax) - ylog_lo) + 1e-9;

  const double width = 880, height = 560;
  const double ml = 70, mr = 180, mt = 30, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto x_of = [&](double k) { return ml + pw * (kmax > 0 ? k / kmax : 0.0); };
  auto y_of = [&](double f) {
    const double v = std::log10(std::max(f, floor));
    return mt + ph * (1.0 - (v - ylog_lo) / (ylog_hi - ylog_lo));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";

  // y ticks at integer decades
  for (int dec = static_cast<int>(std::ceil(ylog_lo)); dec <= static_cast<int>(std::floor(ylog_hi));
       ++dec) {
    const double y = mt + ph * (1.0 - (dec - ylog_lo) / (ylog_hi - ylog_lo));
    svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"12\">1e" << dec << "</text>\n";
  }
  // x ticks
  for (int t = 0; t <= 4; ++t) {
    const double k = kmax * t / 4.0;
    const double x = x_of(k);
    svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
        << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << static_cast<long>(k) << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">iteration</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">loss</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (!series[i].points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [k, f] : series[i].points) {
        svg << x_of(k) << ',' << y_of(f) << ' ';
      }
      svg << "\"/>\n";
    }
    const double ly = mt + 16 + 20 * static_cast<double>(i);
    svg << "<rect x=\"" << ml + pw + 14 << "\" y=\"" << ly - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << ml + pw + 32 << "\" y=\"" << ly + 2 << "\" font-size=\"12\">"
        << series[i].label << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << svg.str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace savopt
