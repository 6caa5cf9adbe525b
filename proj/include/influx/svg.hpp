#pragma once

#include <string>
#include <vector>

#include "influx/io.hpp"

namespace influx {

struct SvgOptions {
  int width = 640;
  int height = 420;
  std::string x_label = "t";
  std::string y_label = "sigma";
};

/// Deterministic static SVG line chart: one polyline per named curve, axes
/// with tick labels, legend from the series names. Byte-identical output
/// for identical input.
std::string render_svg(const std::vector<std::pair<std::string, Curve>>& series,
                       SvgOptions opts = {});

}  // namespace influx
