// Copyright 2026 The ARMOR-Tabular Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "armor/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "armor/error.hpp"

namespace armor {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::string tick_label(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string line_chart_svg(const std::vector<LineSeries>& series, const ChartOptions& options) {
  const double left = 70, right = 150, top = 40, bottom = 55;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const LineSeries& s : series)
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.ys[i]) || !std::isfinite(tx(s.xs[i]))) continue;
      x_lo = std::min(x_lo, tx(s.xs[i]));
      x_hi = std::max(x_hi, tx(s.xs[i]));
      y_lo = std::min(y_lo, s.ys[i]);
      y_hi = std::max(y_hi, s.ys[i]);
    }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto px = [&](double x) { return left + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(options.title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    const double yp = py(yv);
    svg << "<line x1=\"" << left << "\" y1=\"" << fixed(yp, 2) << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << fixed(yp, 2) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(yp + 4, 2) << "\" text-anchor=\"end\">"
        << tick_label(yv) << "</text>\n";
    const double xt = x_lo + (x_hi - x_lo) * i / 4.0;
    const double xp = left + (xt - x_lo) / (x_hi - x_lo) * plot_w;
    svg << "<text x=\"" << fixed(xp, 2) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << tick_label(options.log_x ? std::pow(10.0, xt) : xt)
        << "</text>\n";
  }
  svg << "<text x=\"" << fixed(left + plot_w / 2, 2) << "\" y=\"" << options.height - 12
      << "\" text-anchor=\"middle\">" << escape_xml(options.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << fixed(top + plot_h / 2, 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(options.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const LineSeries& s = series[k];
    const char* colour = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.ys[i])) continue;
      svg << fixed(px(s.xs[i]), 2) << ',' << fixed(py(s.ys[i]), 2) << ' ';
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.ys[i])) continue;
      svg << "<circle cx=\"" << fixed(px(s.xs[i]), 2) << "\" cy=\"" << fixed(py(s.ys[i]), 2)
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = top + 16 + 18 * static_cast<double>(k);
    svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << left + plot_w + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly << "\">" << escape_xml(s.name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error while writing " + path.string());
}

}  // namespace armor
