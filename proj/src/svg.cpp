#include "influx/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace influx {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<std::pair<std::string, Curve>>& series,
                       SvgOptions opts) {
  if (series.empty()) throw std::invalid_argument("no curves to plot");
  double xmin = kInfDistance, xmax = -kInfDistance;
  double ymin = kInfDistance, ymax = -kInfDistance;
  for (const auto& [name, c] : series) {
    for (double t : c.t) {
      xmin = std::min(xmin, t);
      xmax = std::max(xmax, t);
    }
    for (double v : c.value) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  const double ml = 56, mr = 16, mt = 16, mb = 44;  // margins
  const double pw = opts.width - ml - mr, ph = opts.height - mt - mb;
  auto sx = [&](double t) { return ml + (t - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) {
    return mt + ph - (v - ymin) / (ymax - ymin) * ph;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
      << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width
      << " " << opts.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(mt + ph + 16)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx)
        << "</text>\n";
    out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\""
      << fmt(opts.height - 8) << "\" font-size=\"12\" text-anchor=\"middle\">"
      << opts.x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt(mt + ph / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(mt + ph / 2) << ")\">" << opts.y_label << "</text>\n";

  std::size_t idx = 0;
  for (const auto& [name, c] : series) {
    const char* color = kPalette[idx % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t m = 0; m < c.t.size(); ++m) {
      if (m) out << " ";
      out << fmt(sx(c.t[m])) << "," << fmt(sy(c.value[m]));
    }
    out << "\"/>\n";
    double ly = mt + 14 + 16 * static_cast<double>(idx);
    out << "<line x1=\"" << fmt(ml + pw - 120) << "\" y1=\"" << fmt(ly - 4)
        << "\" x2=\"" << fmt(ml + pw - 96) << "\" y2=\"" << fmt(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << fmt(ml + pw - 90) << "\" y=\"" << fmt(ly)
        << "\" font-size=\"11\">" << name << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace influx
