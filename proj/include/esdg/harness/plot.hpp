#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "esdg/diagnostics.hpp"
#include "esdg/error.hpp"
#include "esdg/harness/csv.hpp"

namespace esdg::harness {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers_only = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;
  std::vector<std::string> notes;  // printed under the legend
};

namespace detail {

inline const char* palette(std::size_t i) {
  static const char* c[] = {"#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};
  return c[i % 8];
}

inline std::string esc(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else o += ch;
  }
  return o;
}

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace detail

/// Renders a line plot. Non-positive values are dropped on log axes.
inline std::string render_svg(const PlotSpec& p) {
  if (p.series.empty()) throw Error(ErrorKind::plot_error, "nothing to plot");
  const double W = 640, H = 440, L = 80, R = 170, T = 40, B = 60;
  auto tx = [&](double v) { return p.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!p.logx || x > 0) && (!p.logy || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!std::isfinite(x0)) throw Error(ErrorKind::plot_error, "no plottable points");
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double mx = 0.04 * (x1 - x0), my = 0.06 * (y1 - y0);
  x0 -= mx, x1 += mx, y0 -= my, y1 += my;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  // ticks: 5 evenly spaced in the transformed coordinate
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double vx = p.logx ? std::pow(10.0, fx) : fx, vy = p.logy ? std::pow(10.0, fy) : fy;
    const double X = L + (W - L - R) * i / 4.0, Y = H - B - (H - T - B) * i / 4.0;
    os << "<line x1=\"" << X << "\" y1=\"" << H - B << "\" x2=\"" << X << "\" y2=\"" << T
       << "\" stroke=\"#ddd\" stroke-dasharray=\"3,3\"/>\n";
    os << "<text x=\"" << X << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << detail::num(vx) << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << Y << "\" x2=\"" << W - R << "\" y2=\"" << Y
       << "\" stroke=\"#ddd\" stroke-dasharray=\"3,3\"/>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">" << detail::num(vy) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << T - 14 << "\" text-anchor=\"middle\" font-size=\"14\">"
     << detail::esc(p.title) << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << detail::esc(p.xlabel)
     << "</text>\n";
  os << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::esc(p.ylabel) << "</text>\n";

  for (std::size_t s = 0; s < p.series.size(); ++s) {
    const auto& S = p.series[s];
    const char* col = detail::palette(s);
    std::ostringstream pts;
    int n = 0;
    for (std::size_t i = 0; i < S.x.size() && i < S.y.size(); ++i) {
      if (!usable(S.x[i], S.y[i])) continue;
      pts << px(S.x[i]) << "," << py(S.y[i]) << " ";
      ++n;
    }
    if (!S.markers_only && n > 0)
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    if (S.markers_only || S.x.size() <= 40)
      for (std::size_t i = 0; i < S.x.size() && i < S.y.size(); ++i)
        if (usable(S.x[i], S.y[i]))
          os << "<circle cx=\"" << px(S.x[i]) << "\" cy=\"" << py(S.y[i]) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    const double ly = T + 14 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 34 << "\" y=\"" << ly << "\">" << detail::esc(S.label) << "</text>\n";
  }
  for (std::size_t i = 0; i < p.notes.size(); ++i)
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 30 + 18.0 * static_cast<double>(p.series.size() + i)
       << "\">" << detail::esc(p.notes[i]) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

inline void write_svg(const std::string& path, const PlotSpec& p) {
  const std::string svg = render_svg(p);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::plot_error, "cannot write '" + path + "'");
  out << svg;
}

struct SlopeAnnotation {
  std::string group;
  double slope = 0.0;
};

/// Log-log convergence plot, one series per distinct value of the `group`
/// columns, annotated with the least-squares slope over the three finest
/// points.
inline std::vector<SlopeAnnotation> convergence_plot(const Table& t, const std::string& xcol, const std::string& ycol,
                                                     const std::vector<std::string>& group, PlotSpec& spec) {
  if (t.empty()) throw Error(ErrorKind::plot_error, "empty table");
  const auto x = t.numbers(xcol), y = t.numbers(ycol);
  std::vector<std::vector<std::string>> keys(group.size());
  for (std::size_t g = 0; g < group.size(); ++g) keys[g] = t.strings(group[g]);
  std::map<std::string, Series> by;
  std::vector<std::string> order;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::string k;
    for (std::size_t g = 0; g < group.size(); ++g) k += (g ? " " : "") + group[g] + "=" + keys[g][r];
    if (!by.count(k)) order.push_back(k);
    auto& s = by[k];
    s.label = k;
    s.x.push_back(x[r]);
    s.y.push_back(y[r]);
  }
  std::vector<SlopeAnnotation> slopes;
  spec.logx = spec.logy = true;
  if (spec.xlabel.empty()) spec.xlabel = xcol;
  if (spec.ylabel.empty()) spec.ylabel = ycol;
  for (const auto& k : order) {
    auto s = by[k];
    // sort by decreasing x so "finest" means last
    std::vector<std::size_t> idx(s.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.x[a] > s.x[b]; });
    Series sorted{s.label, {}, {}};
    for (auto i : idx) {
      sorted.x.push_back(s.x[i]);
      sorted.y.push_back(s.y[i]);
    }
    if (sorted.x.size() >= 2) {
      const double r = convergence_rate(sorted.x, sorted.y, 3);
      slopes.push_back({k, r});
      sorted.label += " (slope " + detail::num(r) + ")";
    }
    spec.series.push_back(std::move(sorted));
  }
  return slopes;
}

/// Plots ycols against xcol, optionally one series per distinct `group` value.
inline void series_plot(const Table& t, const std::string& xcol, const std::vector<std::string>& ycols,
                        const std::string& group, PlotSpec& spec) {
  if (t.empty()) throw Error(ErrorKind::plot_error, "empty table");
  const auto x = t.numbers(xcol);
  if (spec.xlabel.empty()) spec.xlabel = xcol;
  if (spec.ylabel.empty() && ycols.size() == 1) spec.ylabel = ycols.front();
  std::vector<std::string> gk;
  if (!group.empty()) gk = t.strings(group);
  for (const auto& yc : ycols) {
    const auto y = t.numbers(yc);
    std::map<std::string, Series> by;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < x.size(); ++r) {
      const std::string k = group.empty() ? yc : (ycols.size() > 1 ? yc + " " : "") + group + "=" + gk[r];
      if (!by.count(k)) order.push_back(k);
      by[k].label = k;
      by[k].x.push_back(x[r]);
      by[k].y.push_back(y[r]);
    }
    for (const auto& k : order) spec.series.push_back(by[k]);
  }
}

}  // namespace esdg::harness
