#pragma once

// Static SVG line charts. Axes switch to log scale when asked to, or
// automatically when positive data spans more than two decades.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hbevent/errors.hpp"

namespace hbevent::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;  // NaN in y breaks the line
  bool markers = false;
};

enum class Scale { Auto, Linear, Log };

struct Chart {
  std::string title, xlabel, ylabel;
  Scale xscale = Scale::Auto, yscale = Scale::Auto;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  double map(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::ceil(lo - 1e-9); e <= hi + 1e-9; e += 1.0) t.push_back(std::pow(10.0, e));
      return t;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  }
};

inline Axis make_axis(const std::vector<double>& data, Scale scale) {
  double mn = std::numeric_limits<double>::infinity(), mx = -mn, pos_mn = mn;
  for (double v : data) {
    if (!std::isfinite(v)) continue;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    if (v > 0.0) pos_mn = std::min(pos_mn, v);
  }
  Axis a;
  if (!std::isfinite(mn)) return a;
  a.log = scale == Scale::Log || (scale == Scale::Auto && mn > 0.0 && mx / mn > 100.0);
  if (a.log) {
    if (!std::isfinite(pos_mn)) throw Error(ErrorKind::InvalidArgument, "log axis needs positive data");
    a.lo = std::floor(std::log10(pos_mn));
    a.hi = std::ceil(std::log10(mx));
    if (a.hi <= a.lo) a.hi = a.lo + 1.0;
  } else {
    const double pad = mx > mn ? 0.05 * (mx - mn) : std::max(1e-3, 0.1 * std::abs(mx));
    a.lo = mn - pad;
    a.hi = mx + pad;
  }
  return a;
}

}  // namespace detail

inline void write(std::ostream& os, const Chart& c) {
  constexpr double W = 720, Hh = 480, L = 80, R = 170, T = 40, B = 60;
  const double pw = W - L - R, ph = Hh - T - B;
  std::vector<double> xs, ys;
  for (const auto& s : c.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const auto ax = detail::make_axis(xs, c.xscale), ay = detail::make_axis(ys, c.yscale);
  auto px = [&](double v) { return L + ax.frac(v) * pw; };
  auto py = [&](double v) { return T + (1.0 - ay.frac(v)) * ph; };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << detail::escape(c.title)
     << "</text>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << T << "\" x2=\"" << x << "\" y2=\"" << T + ph
       << "\" stroke=\"#e0e0e0\"/>\n<text x=\"" << x << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">"
       << detail::num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << L + pw << "\" y2=\"" << y
       << "\" stroke=\"#e0e0e0\"/>\n<text x=\"" << L - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << detail::num(t) << "</text>\n";
  }
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << Hh - 16 << "\" text-anchor=\"middle\">" << detail::escape(c.xlabel)
     << (ax.log ? " (log)" : "") << "</text>\n";
  os << "<text transform=\"translate(18," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::escape(c.ylabel) << (ay.log ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& s = c.series[k];
    const char* col = palette[k % 10];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!ax.log || s.x[i] > 0) && (!ay.log || s.y[i] > 0);
      if (!ok) {
        flush();
        continue;
      }
      pts += detail::num(px(s.x[i])) + "," + detail::num(py(s.y[i])) + " ";
      if (s.markers)
        os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
    }
    flush();
    const double ly = T + 14 + 18.0 * double(k);
    os << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 36 << "\" y2=\"" << ly
       << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n<text x=\"" << L + pw + 42 << "\" y=\"" << ly + 4 << "\">"
       << detail::escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

inline void write_file(const std::string& path, const Chart& c) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
  write(f, c);
}

}  // namespace hbevent::svg
