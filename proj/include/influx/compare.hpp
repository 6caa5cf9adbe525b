#pragma once

#include <string>
#include <vector>

#include "influx/io.hpp"

namespace influx {

/// Relative-error metrics between two influence curves; the second curve is
/// the reference. Mismatched grids are linearly resampled onto their
/// overlap; disjoint ranges are an error.
struct CompareResult {
  std::vector<double> t;
  std::vector<double> relative_error;  // |a - b| / b per grid point
  double max_relative_error;
  double mean_relative_error;
};

CompareResult compare_curves(const Curve& curve, const Curve& reference);

/// Linear interpolation of a curve at t (t must be inside the range).
double interpolate(const Curve& curve, double t);

}  // namespace influx
