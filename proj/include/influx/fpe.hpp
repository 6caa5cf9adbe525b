#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "influx/graph.hpp"
#include "influx/io.hpp"
#include "influx/kernels.hpp"

namespace influx {

/// Coefficients of the lumped birth-death system on activation counts
/// 0..K: q[k] is the rate M_k -> M_{k+1} (q[K] = 0 always), r[k] the rate
/// M_k -> M_{k-1} (r[0] = 0 always). Either constant vectors or
/// time-sampled curves; sampled entries may be NaN (undefined).
struct RateProfile {
  enum class Kind { constant, sampled };
  Kind kind = Kind::constant;

  // constant
  std::vector<double> q;  // length K+1, q[K] == 0
  std::vector<double> r;  // length K+1, r[0] == 0

  // sampled
  std::vector<double> time;
  std::vector<std::vector<double>> q_samples;
  std::vector<std::vector<double>> r_samples;

  std::size_t states() const {
    return kind == Kind::constant ? q.size() : q_samples.front().size();
  }
  bool has_recovery() const;

  /// Linear interpolation at t (clamped to the sample range); NaN entries
  /// read as 0. For constant profiles, returns q/r directly.
  void q_at(double t, std::vector<double>& out) const;
  void r_at(double t, std::vector<double>& out) const;

  /// Replaces NaN entries of a sampled profile by the nearest defined
  /// value in time for the same k (0 when a k is never defined).
  void fill_undefined();

  static RateProfile constant(std::vector<double> q, std::vector<double> r = {});
};

struct StabilityError : std::runtime_error {
  StabilityError(const std::string& msg, double suggested)
      : std::runtime_error(msg), suggested_step(suggested) {}
  double suggested_step;
};

/// rho(0) = e_{|S|}.
std::vector<double> initial_distribution(std::size_t states,
                                         std::size_t source_count);

/// FPE-dist: constant q[k] = alpha(U_k^*) (+ beta of the complement), with
/// U_k^* the minimum-distance k-prefix of the activation order.
RateProfile rates_dist(const PropagationNetwork& net, const NodeSet& sources);

struct TreeRates {
  RateProfile profile;
  /// Jump-chain probability mass retained per layer k after pruning to
  /// width m (1 where the layer was never pruned).
  std::vector<double> retained_mass;
};

/// FPE-tree: layered beam search over activated sets, branch probabilities
/// from the exponential race, duplicates merged, top-m kept per layer;
/// q[k] is the retained-mass-renormalized expectation of alpha(U).
TreeRates rates_tree(const PropagationNetwork& net, const NodeSet& sources,
                     std::size_t width);

/// Dense (K+1)x(K+1) generator Q(t)+R(t) as three diagonals
/// (sub, main, super). Row sums are zero.
struct TridiagonalGenerator {
  std::vector<double> sub, main, super;
};
TridiagonalGenerator build_generator(const RateProfile& rates, double t);

struct SolveOptions {
  double step = 0;  // 0: auto, max(q+r) * h <= 0.1
  kernels::Exec exec = kernels::Exec::serial;
  double negative_tolerance = 1e-9;
};

/// Classical fixed-step RK4 for rho' = rho (Q + R) evaluated on the given
/// grid (grid[0] may be > 0; integration starts at t = 0). Output rows are
/// clipped and renormalized. Constant profiles use a fused banded one-pass
/// propagator per step.
DensityTable solve_rk4(const RateProfile& rates,
                       const std::vector<double>& rho0,
                       const std::vector<double>& time_grid,
                       SolveOptions opts = {});

/// rho(t) = rho0 e^{tA} for a constant profile, via uniformization on the
/// tridiagonal generator.
std::vector<double> solve_expm(const RateProfile& rates,
                               const std::vector<double>& rho0, double t,
                               double tail_tolerance = 1e-12);
DensityTable solve_expm_grid(const RateProfile& rates,
                             const std::vector<double>& rho0,
                             const std::vector<double>& time_grid,
                             double tail_tolerance = 1e-12);

/// Nested-integral recursion for the no-recovery constant-rate chain
/// starting from a point mass; composite-Simpson quadrature on a refined
/// grid. Independent validation path for the ODE solvers.
DensityTable solve_closed_form(const RateProfile& rates,
                               std::size_t source_count,
                               const std::vector<double>& time_grid,
                               std::size_t refine = 32);

/// sigma = sum_k k rho_k.
double influence(const std::vector<double>& rho);
Curve influence_curve(const DensityTable& density);

enum class Method { dist, tree };
enum class Solver { rk4, expm };

struct PredictOptions {
  Method method = Method::dist;
  std::size_t tree_width = 64;
  Solver solver = Solver::expm;
  SolveOptions solve;
};

struct Prediction {
  Curve curve;
  RateProfile profile;
  DensityTable density;
  std::vector<double> retained_mass;  // FPE-tree only
  std::string method_name;
  std::string solver_name;
};

/// Full pipeline: estimate rates, assemble the generator, solve, reduce to
/// the influence curve.
Prediction predict(const PropagationNetwork& net, const NodeSet& sources,
                   const std::vector<double>& time_grid,
                   PredictOptions opts = {});

/// Uniform grid with `points` samples over [0, t_max], starting at 0.
std::vector<double> uniform_grid(double t_max, std::size_t points);

}  // namespace influx
