#pragma once

#include <cstdint>
#include <vector>

#include "influx/fpe.hpp"
#include "influx/graph.hpp"
#include "influx/io.hpp"

namespace influx {

struct OracleOptions {
  NodeId state_limit = 16;        // refuse above 2^limit configurations
  double tail_tolerance = 1e-10;  // uniformization truncation per step
  double rho_threshold = 1e-9;    // below this, exact rates are undefined
  bool keep_raw = false;          // retain full configuration trajectories
};

/// Exact transient solution of the full 2^K-configuration Markov chain,
/// lumped onto activation counts, with the exact time-varying transition
/// rates of the count chain.
struct ExactSolution {
  DensityTable density;  // lumped rho_k(t)
  RateTable q_rates;     // exact q_k(t); NaN where rho_k below threshold
  RateTable r_rates;     // exact r_k(t)
  /// raw[m][mask] = Pr(t_m; U), kept only when keep_raw is set.
  std::vector<std::vector<double>> raw;

  /// Exact rates as a sampled RateProfile for feeding the FPE solvers.
  RateProfile rate_profile() const;
};

ExactSolution exact_solve(const PropagationNetwork& net, const NodeSet& sources,
                          const std::vector<double>& time_grid,
                          OracleOptions opts = {});

/// Numerical check of the rate-perturbation error theory: per-k measured
/// rate errors against the hypothesis threshold, and the predicted-vs-exact
/// influence error against the envelope
///   [(1+eps)^K - 1] * min{1, c_K(t) e^{-alpha_min t}}.
struct BoundReport {
  double epsilon;
  double alpha_max;  // largest edge rate
  double alpha_min;  // smallest edge rate
  std::size_t max_out_degree;
  double q_bar;  // sup of exact q_k over the grid

  std::vector<double> t;
  /// delta[m][k] = |qhat_k - q_k(t_m)| / q_k(t_m); NaN where undefined.
  std::vector<std::vector<double>> delta;
  /// threshold[m][k]: the hypothesis bound on delta.
  std::vector<std::vector<double>> threshold;
  /// hypothesis_ok[m] = every defined delta on row m meets its threshold.
  std::vector<char> hypothesis_ok;
  std::vector<double> influence_error;  // |sigma_hat - sigma| / sigma
  std::vector<double> envelope;
  /// pass[m]: hypothesis holds (over all rows up to m) and the error is
  /// within the envelope; rows with a failed hypothesis are not asserted.
  std::vector<char> pass;

  bool all_pass() const;
};

BoundReport verify_bounds(const PropagationNetwork& net, const NodeSet& sources,
                          const RateProfile& estimated, double epsilon,
                          const std::vector<double>& time_grid,
                          OracleOptions opts = {});

}  // namespace influx
