// Copyright 2026 The nhsim Authors
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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nhsim/cli.hpp"
#include "nhsim/errors.hpp"

namespace nhsim {

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& m : t.metadata) os << "# " << m << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

void write_text(const std::filesystem::path& file, std::string_view text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Config, "cannot write " + file.string());
}

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 55;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const Plot& p) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(p.title) << "</text>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(xmax - xmin), ys = nice_step(ymax - ymin);
  for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-9 * xs; x += xs) {
    os << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(sx(x))
       << "\" y2=\"" << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-9 * ys; y += ys) {
    os << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << fmt(kLeft)
       << "\" y2=\"" << fmt(sy(y)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(y) + 4)
       << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 12)
     << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << fmt(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

  for (const auto& s : p.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == Series::Style::Line || s.style == Series::Style::Dashed) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
      if (s.style == Series::Style::Dashed) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          os << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        const double cx = sx(s.x[i]), cy = sy(s.y[i]);
        if (s.style == Series::Style::Dot)
          os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"2.5\" fill=\""
             << s.color << "\"/>\n";
        else
          os << "<path d=\"M" << fmt(cx - 3) << ' ' << fmt(cy - 3) << "L" << fmt(cx + 3) << ' '
             << fmt(cy + 3) << "M" << fmt(cx - 3) << ' ' << fmt(cy + 3) << "L" << fmt(cx + 3) << ' '
             << fmt(cy - 3) << "\" stroke=\"" << s.color << "\"/>\n";
      }
    }
  }

  double ly = kTop + 10;
  const double lx = kLeft + pw + 15;
  for (const auto& s : p.series) {
    if (s.style == Series::Style::Line || s.style == Series::Style::Dashed)
      os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 20)
         << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
         << (s.style == Series::Style::Dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
    else if (s.style == Series::Style::Dot)
      os << "<circle cx=\"" << fmt(lx + 10) << "\" cy=\"" << fmt(ly) << "\" r=\"2.5\" fill=\""
         << s.color << "\"/>";
    else
      os << "<path d=\"M" << fmt(lx + 7) << ' ' << fmt(ly - 3) << "L" << fmt(lx + 13) << ' '
         << fmt(ly + 3) << "M" << fmt(lx + 7) << ' ' << fmt(ly + 3) << "L" << fmt(lx + 13) << ' '
         << fmt(ly - 3) << "\" stroke=\"" << s.color << "\"/>";
    os << "<text x=\"" << fmt(lx + 26) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.name)
       << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nhsim
