#include "influx/compare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace influx {

double interpolate(const Curve& curve, double t) {
  if (t < curve.t.front() || t > curve.t.back())
    throw std::invalid_argument("interpolation outside curve range");
  auto it = std::lower_bound(curve.t.begin(), curve.t.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - curve.t.begin());
  if (curve.t[hi] == t) return curve.value[hi];
  std::size_t lo = hi - 1;
  double w = (t - curve.t[lo]) / (curve.t[hi] - curve.t[lo]);
  return curve.value[lo] + w * (curve.value[hi] - curve.value[lo]);
}

CompareResult compare_curves(const Curve& curve, const Curve& reference) {
  double lo = std::max(curve.t.front(), reference.t.front());
  double hi = std::min(curve.t.back(), reference.t.back());
  if (lo > hi) throw std::invalid_argument("curves cover disjoint time ranges");

  // Shared grid: the reference grid restricted to the overlap.
  CompareResult result;
  for (std::size_t m = 0; m < reference.t.size(); ++m) {
    double t = reference.t[m];
    if (t < lo || t > hi) continue;
    double a = interpolate(curve, t);
    double b = reference.value[m];
    result.t.push_back(t);
    result.relative_error.push_back(b != 0 ? std::abs(a - b) / std::abs(b)
                                           : (a == 0 ? 0.0 : kInfDistance));
  }
  if (result.t.empty()) throw std::invalid_argument("no overlapping samples");
  result.max_relative_error =
      *std::max_element(result.relative_error.begin(),
                        result.relative_error.end());
  double sum = 0;
  for (double e : result.relative_error) sum += e;
  result.mean_relative_error =
      sum / static_cast<double>(result.relative_error.size());
  return result;
}

}  // namespace influx
