// Copyright 2026 The shapeboost Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shapeboost/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "shapeboost/errors.hpp"

namespace shapeboost {

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 40.0;
const char* const kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps data coordinates into the plot area, y pointing up.
struct Frame {
  double x0, x1, y0, y1;
  double sx, sy;

  Frame(double xlo, double xhi, double ylo, double yhi, bool equal) {
    if (xhi - xlo < 1e-12) { xlo -= 0.5; xhi += 0.5; }
    if (yhi - ylo < 1e-12) { ylo -= 0.5; yhi += 0.5; }
    const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
    sx = pw / (xhi - xlo);
    sy = ph / (yhi - ylo);
    if (equal) {
      sx = sy = std::min(sx, sy);
      const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
      xlo = cx - 0.5 * pw / sx;
      xhi = cx + 0.5 * pw / sx;
      ylo = cy - 0.5 * ph / sy;
      yhi = cy + 0.5 * ph / sy;
    }
    x0 = xlo; x1 = xhi; y0 = ylo; y1 = yhi;
  }
  double px(double x) const { return kMargin + (x - x0) * sx; }
  double py(double y) const { return kHeight - kMargin - (y - y0) * sy; }
};

std::string open_svg(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">"
    << escape(title) << "</text>\n";
  return s.str();
}

std::string polyline(const Frame& f, const Eigen::VectorXcd& z, bool closed, const char* color,
                     const char* extra) {
  std::ostringstream s;
  s << '<' << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << color
    << "\" stroke-width=\"1.5\" " << extra << " points=\"";
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    s << (j ? " " : "") << num(f.px(z[j].real())) << ',' << num(f.py(z[j].imag()));
  }
  s << "\"/>\n";
  return s.str();
}

}  // namespace

std::string direction_svg(const DirectionVisual& v, const std::string& title, bool closed) {
  if (v.pole.size() != v.displaced.size() || v.pole.size() == 0) {
    throw InputError("direction plot needs matching, nonempty point sets");
  }
  const auto lo_hi = [&](auto part) {
    double lo = part(v.pole[0]), hi = lo;
    for (Eigen::Index j = 0; j < v.pole.size(); ++j) {
      for (double x : {part(v.pole[j]), part(v.displaced[j])}) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    return std::pair{lo, hi};
  };
  const auto [xlo, xhi] = lo_hi([](Complex z) { return z.real(); });
  const auto [ylo, yhi] = lo_hi([](Complex z) { return z.imag(); });
  const Frame f(xlo, xhi, ylo, yhi, true);
  std::string out = open_svg(title);
  out += "<g stroke=\"#999999\" stroke-width=\"0.6\">\n";
  for (Eigen::Index j = 0; j < v.pole.size(); ++j) {
    out += "<line x1=\"" + num(f.px(v.pole[j].real())) + "\" y1=\"" + num(f.py(v.pole[j].imag())) +
           "\" x2=\"" + num(f.px(v.displaced[j].real())) + "\" y2=\"" +
           num(f.py(v.displaced[j].imag())) + "\"/>\n";
  }
  out += "</g>\n";
  out += polyline(f, v.pole, closed, kPalette[5], "");
  out += polyline(f, v.displaced, closed, kPalette[1], "stroke-dasharray=\"5,3\"");
  out += "</svg>\n";
  return out;
}

std::string scalar_effect_svg(const Eigen::VectorXd& x, const Eigen::MatrixXd& ys,
                              const std::vector<std::string>& series, const std::string& x_label,
                              const std::string& title, const std::vector<std::string>& tick_labels) {
  if (ys.rows() != x.size() || x.size() == 0) throw InputError("effect plot sizes do not match");
  if (!tick_labels.empty() && tick_labels.size() != static_cast<std::size_t>(x.size())) {
    throw InputError("effect plot needs one tick label per x value");
  }
  const double ylo = std::min(0.0, ys.minCoeff()), yhi = std::max(0.0, ys.maxCoeff());
  const Frame f(x.minCoeff(), x.maxCoeff(), ylo, yhi, false);
  std::ostringstream s;
  s << open_svg(title);
  // Zero line and x axis label.
  s << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(f.py(0)) << "\" x2=\""
    << num(kWidth - kMargin) << "\" y2=\"" << num(f.py(0)) << "\" stroke=\"#bbbbbb\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label)
    << "</text>\n";
  for (std::size_t t = 0; t < tick_labels.size(); ++t) {
    s << "<text x=\"" << num(f.px(x[static_cast<Eigen::Index>(t)])) << "\" y=\""
      << num(kHeight - kMargin + 14) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << escape(tick_labels[t]) << "</text>\n";
  }
  for (Eigen::Index c = 0; c < ys.cols(); ++c) {
    const char* color = kPalette[c % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      s << (j ? " " : "") << num(f.px(x[j])) << ',' << num(f.py(ys(j, c)));
    }
    s << "\"/>\n";
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      s << "<circle cx=\"" << num(f.px(x[j])) << "\" cy=\"" << num(f.py(ys(j, c)))
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const std::string name = static_cast<std::size_t>(c) < series.size() ? series[c] : "";
    s << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(kMargin + 14.0 * c)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
      << "\">" << escape(name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace shapeboost
