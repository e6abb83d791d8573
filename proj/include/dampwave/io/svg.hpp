#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace dampwave::io {

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double W = 640.0, H = 480.0, pad = 60.0;

  double px(double x) const { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); }
  double py(double y) const { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); }
};

inline std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
         "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
         "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<rect x=\"60\" y=\"60\" width=\"520\" height=\"360\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.3g", x);
    std::snprintf(by, sizeof by, "%.3g", y);
    s += "<text x=\"" + fmt(f.px(x)) + "\" y=\"438\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + bx + "</text>\n";
    s += "<text x=\"54\" y=\"" + fmt(f.py(y) + 3) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + by + "</text>\n";
  }
  s += "<text x=\"320\" y=\"462\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xlabel + "</text>\n";
  s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 240)\">" + ylabel + "</text>\n";
  return s;
}

inline void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double m = std::max(std::abs(lo), 1.0);
    lo -= 0.5 * m;
    hi += 0.5 * m;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

}  // namespace detail

struct ScatterPoint {
  double re;
  double im;
  bool retained;
};

/// Eigenvalue scatter in the complex plane; retained points filled, filtered
/// points hollow, optional dashed vertical line at the continuum abscissa.
inline std::string spectrum_svg(const std::vector<ScatterPoint>& pts, std::optional<double> pde_re,
                                const std::string& title) {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.re);
    x1 = std::max(x1, p.re);
    y0 = std::min(y0, p.im);
    y1 = std::max(y1, p.im);
  }
  if (pde_re) {
    x0 = std::min(x0, *pde_re);
    x1 = std::max(x1, *pde_re);
  }
  detail::widen(x0, x1);
  detail::widen(y0, y1);
  const detail::Frame f{x0, x1, y0, y1};
  std::string s = detail::header(title) + detail::axes(f, "Re(lambda)", "Im(lambda)");
  if (pde_re)
    s += "<line x1=\"" + detail::fmt(f.px(*pde_re)) + "\" y1=\"60\" x2=\"" + detail::fmt(f.px(*pde_re)) +
         "\" y2=\"420\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  for (const auto& p : pts) {
    s += "<circle cx=\"" + detail::fmt(f.px(p.re)) + "\" cy=\"" + detail::fmt(f.py(p.im)) + "\" r=\"3\" " +
         (p.retained ? "fill=\"steelblue\" stroke=\"steelblue\"" : "fill=\"none\" stroke=\"firebrick\"") + "/>\n";
  }
  s += "</svg>\n";
  return s;
}

/// log10 E(t) line plot with an optional predicted envelope log10(M E0 e^{-sigma t}).
inline std::string energy_svg(const std::vector<double>& t, const std::vector<double>& E,
                              std::optional<std::pair<double, double>> envelope, const std::string& title) {
  std::vector<double> ly;
  for (double e : E) ly.push_back(std::log10(std::max(e, 1e-300)));
  double x0 = t.empty() ? 0.0 : t.front(), x1 = t.empty() ? 1.0 : t.back();
  double y0 = *std::min_element(ly.begin(), ly.end());
  double y1 = *std::max_element(ly.begin(), ly.end());
  std::vector<double> env;
  if (envelope) {
    for (double tt : t) env.push_back(std::log10(envelope->first * E.front()) - envelope->second * (tt - x0) / std::log(10.0));
    y0 = std::min(y0, *std::min_element(env.begin(), env.end()));
    y1 = std::max(y1, *std::max_element(env.begin(), env.end()));
  }
  detail::widen(y0, y1);
  if (!(x1 > x0)) x1 = x0 + 1.0;
  const detail::Frame f{x0, x1, y0, y1};
  std::string s = detail::header(title) + detail::axes(f, "t", "log10 E");
  // Decimate to at most 2000 vertices.
  const std::size_t stride = std::max<std::size_t>(1, t.size() / 2000);
  auto poly = [&](const std::vector<double>& y, const char* style) {
    std::string p = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
    for (std::size_t k = 0; k < t.size(); k += stride) p += detail::fmt(f.px(t[k])) + "," + detail::fmt(f.py(y[k])) + " ";
    p += "\"/>\n";
    return p;
  };
  s += poly(ly, "stroke=\"steelblue\" stroke-width=\"1.2\"");
  if (envelope) s += poly(env, "stroke=\"firebrick\" stroke-dasharray=\"6 4\"");
  s += "</svg>\n";
  return s;
}

}  // namespace dampwave::io
