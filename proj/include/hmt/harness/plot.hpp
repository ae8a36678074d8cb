#pragma once

// Deterministic SVG plots of result CSVs: mean total distance against n
// (one polyline per method, log scale) and normalized histograms (one step
// line per method). Fonts, sizes and number formats are fixed, so the same
// CSV always gives the same bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "hmt/harness/csv.hpp"

namespace hmt {

enum class PlotKind { Distance, Histogram };

inline PlotKind parse_plot_kind(const std::string& s) {
  if (s == "distance") return PlotKind::Distance;
  if (s == "histogram") return PlotKind::Histogram;
  throw SchemaMismatch("unknown plot kind: " + s);
}

namespace detail {

inline constexpr double kPlotW = 640.0;
inline constexpr double kPlotH = 420.0;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 150.0;
inline constexpr double kTop = 30.0;
inline constexpr double kBottom = 50.0;
inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

inline std::string fmt(double v, const char* f = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Series in order of first appearance.
template <class Key>
std::vector<Series> ordered_series(const std::vector<CsvRow>& rows, Key&& key) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    const std::string k = key(r);
    if (index.emplace(k, out.size()).second) out.push_back({k, {}});
  }
  return out;
}

inline std::string svg_frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kPlotW, "%.0f") + "\" height=\"" +
       fmt(kPlotH, "%.0f") + "\" font-family=\"DejaVu Sans, sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kPlotW, "%.0f") + "\" height=\"" + fmt(kPlotH, "%.0f") +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kLeft) + "\" y=\"18\" font-size=\"14\">" + title + "</text>\n";
  const double x0 = kLeft;
  const double y0 = kPlotH - kBottom;
  const double x1 = kPlotW - kRight;
  s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(kTop) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt(0.5 * (x0 + x1)) + "\" y=\"" + fmt(kPlotH - 12) + "\" text-anchor=\"middle\">" + xlabel +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(0.5 * (kTop + y0)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(0.5 * (kTop + y0)) + ")\">" + ylabel + "</text>\n";
  return s;
}

inline std::string svg_series(const std::vector<Series>& series, double xmin, double xmax, double ymin, double ymax) {
  const double x0 = kLeft;
  const double x1 = kPlotW - kRight;
  const double y0 = kPlotH - kBottom;
  auto px = [&](double x) { return x0 + (x1 - x0) * (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5); };
  auto py = [&](double y) { return y0 - (y0 - kTop) * (ymax > ymin ? (y - ymin) / (ymax - ymin) : 0.5); };
  std::string s;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (const auto& [x, y] : series[k].points) {
      if (!pts.empty()) pts += ' ';
      pts += fmt(px(x)) + "," + fmt(py(y));
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
         "\"/>\n";
    const double ly = kTop + 18.0 * static_cast<double>(k);
    s += "<line x1=\"" + fmt(x1 + 15) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(x1 + 35) + "\" y2=\"" + fmt(ly) +
         "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt(x1 + 40) + "\" y=\"" + fmt(ly + 4) + "\">" + series[k].name + "</text>\n";
  }
  return s;
}

inline std::string svg_ticks(double xmin, double xmax, double ymin, double ymax, bool log_y) {
  const double x0 = kLeft;
  const double x1 = kPlotW - kRight;
  const double y0 = kPlotH - kBottom;
  std::string s;
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double t = static_cast<double>(i) / kTicks;
    const double xv = xmin + t * (xmax - xmin);
    const double xp = x0 + t * (x1 - x0);
    s += "<text x=\"" + fmt(xp) + "\" y=\"" + fmt(y0 + 16) + "\" text-anchor=\"middle\">" + fmt(xv, "%g") +
         "</text>\n";
  }
  if (log_y) {
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
      const double yp = y0 - (y0 - kTop) * (ymax > ymin ? (e - ymin) / (ymax - ymin) : 0.5);
      s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(yp + 4) + "\" text-anchor=\"end\">1e" + std::to_string(e) +
           "</text>\n";
    }
  } else {
    for (int i = 0; i <= kTicks; ++i) {
      const double t = static_cast<double>(i) / kTicks;
      const double yp = y0 - t * (y0 - kTop);
      s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(yp + 4) + "\" text-anchor=\"end\">" +
           fmt(ymin + t * (ymax - ymin), "%g") + "</text>\n";
    }
  }
  return s;
}

inline std::string distance_plot(const std::vector<CsvRow>& rows) {
  std::vector<CsvRow> ok;
  for (const auto& r : rows) {
    if (r.status == "ok" && r.total_distance) ok.push_back(r);
  }
  if (ok.empty()) throw SchemaMismatch("plot: no rows with a total distance");
  auto series = ordered_series(ok, [](const CsvRow& r) { return r.method; });
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& s : series) {
    std::map<int, std::pair<double, int>> sums;
    for (const auto& r : ok) {
      if (r.method != s.name) continue;
      auto& [sum, count] = sums[r.n];
      sum += *r.total_distance;
      ++count;
    }
    for (const auto& [n, sc] : sums) {
      const double y = std::log10(std::max(sc.first / sc.second, 1e-16));
      s.points.emplace_back(n, y);
      xmin = std::min(xmin, static_cast<double>(n));
      xmax = std::max(xmax, static_cast<double>(n));
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);
  std::string s = svg_frame("mean total distance", "n", "total distance");
  s += svg_ticks(xmin, xmax, ymin, ymax, true);
  s += svg_series(series, xmin, xmax, ymin, ymax);
  s += "</svg>\n";
  return s;
}

inline std::string histogram_plot(const std::vector<CsvRow>& rows) {
  std::vector<CsvRow> ok;
  for (const auto& r : rows) {
    if (r.status == "ok" && r.total_distance) ok.push_back(r);
  }
  if (ok.empty()) throw SchemaMismatch("plot: no samples");
  constexpr int kBins = 20;
  auto series = ordered_series(ok, [](const CsvRow& r) { return r.method; });
  double ymax = 0.0;
  for (auto& s : series) {
    std::vector<int> counts(kBins, 0);
    int total = 0;
    for (const auto& r : ok) {
      if (r.method != s.name) continue;
      const double v = std::clamp(*r.total_distance, 0.0, 1.0);
      ++counts[std::min(kBins - 1, static_cast<int>(v * kBins))];
      ++total;
    }
    for (int b = 0; b < kBins; ++b) {
      const double density = static_cast<double>(counts[b]) * kBins / total;
      s.points.emplace_back(static_cast<double>(b) / kBins, density);
      s.points.emplace_back(static_cast<double>(b + 1) / kBins, density);
      ymax = std::max(ymax, density);
    }
  }
  ymax = std::ceil(std::max(ymax, 1.0));
  std::string s = svg_frame("normalized histogram", "normalized value", "density");
  s += svg_ticks(0.0, 1.0, 0.0, ymax, false);
  s += svg_series(series, 0.0, 1.0, 0.0, ymax);
  s += "</svg>\n";
  return s;
}

}  // namespace detail

/// SVG for a result CSV. Throws SchemaMismatch for empty or unrecognized
/// input.
inline std::string emit_plot(const std::string& csv, PlotKind kind) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) throw SchemaMismatch("plot: csv has no rows");
  return kind == PlotKind::Distance ? detail::distance_plot(rows) : detail::histogram_plot(rows);
}

}  // namespace hmt
