#include "influx/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace influx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Sparse generator of the full 2^K-configuration chain.
struct FullChain {
  std::size_t state_count;
  std::vector<std::size_t> offset;   // per state, into targets/rates
  std::vector<std::uint32_t> target;
  std::vector<double> rate;
  std::vector<double> act_total;  // alpha(U) + beta(U^c) per state
  std::vector<double> rec_total;  // gamma(U) per state
  double theta;                   // max total outflow

  FullChain(const PropagationNetwork& net, NodeId limit) {
    const NodeId n = net.node_count();
    if (n > limit)
      throw std::invalid_argument(
          "exact oracle refused: K = " + std::to_string(n) +
          " exceeds the state limit of " + std::to_string(limit));
    state_count = std::size_t{1} << n;
    act_total.assign(state_count, 0.0);
    rec_total.assign(state_count, 0.0);
    offset.assign(state_count + 1, 0);

    std::vector<std::uint32_t> trg;
    std::vector<double> rt;
    theta = 0;
    for (std::size_t mask = 0; mask < state_count; ++mask) {
      offset[mask] = trg.size();
      for (NodeId j = 0; j < n; ++j) {
        if (mask & (std::size_t{1} << j)) {
          double g = net.recovery_rate(j);
          if (g > 0) {
            trg.push_back(static_cast<std::uint32_t>(
                mask & ~(std::size_t{1} << j)));
            rt.push_back(g);
            rec_total[mask] += g;
          }
        } else {
          double a = net.self_rate(j);
          for (std::size_t e = net.in_offsets()[j];
               e < net.in_offsets()[j + 1]; ++e)
            if (mask & (std::size_t{1} << net.in_sources()[e]))
              a += net.in_rates()[e];
          if (a > 0) {
            trg.push_back(
                static_cast<std::uint32_t>(mask | (std::size_t{1} << j)));
            rt.push_back(a);
            act_total[mask] += a;
          }
        }
      }
      theta = std::max(theta, act_total[mask] + rec_total[mask]);
    }
    offset[state_count] = trg.size();
    target = std::move(trg);
    rate = std::move(rt);
  }

  /// Advances pi by dt via uniformization, in place.
  void step(std::vector<double>& pi, double dt, double tail_tol) const {
    if (theta == 0 || dt == 0) return;
    std::size_t segments =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(theta * dt / 16.0)));
    const double seg_dt = dt / static_cast<double>(segments);
    const double a = theta * seg_dt;
    std::vector<double> v(state_count), next(state_count), acc(state_count);
    for (std::size_t seg = 0; seg < segments; ++seg) {
      v = pi;
      double w = std::exp(-a);
      double wsum = w;
      for (std::size_t s = 0; s < state_count; ++s) acc[s] = w * v[s];
      std::size_t iter = 0;
      while (1.0 - wsum > tail_tol && iter < 100000) {
        ++iter;
        for (std::size_t s = 0; s < state_count; ++s)
          next[s] =
              v[s] * (1.0 - (act_total[s] + rec_total[s]) / theta);
        for (std::size_t s = 0; s < state_count; ++s) {
          double vs = v[s];
          if (vs == 0) continue;
          for (std::size_t e = offset[s]; e < offset[s + 1]; ++e)
            next[target[e]] += vs * rate[e] / theta;
        }
        v.swap(next);
        w *= a / static_cast<double>(iter);
        wsum += w;
        for (std::size_t s = 0; s < state_count; ++s) acc[s] += w * v[s];
      }
      pi = acc;
    }
  }
};

}  // namespace

RateProfile ExactSolution::rate_profile() const {
  RateProfile p;
  p.kind = RateProfile::Kind::sampled;
  p.time = q_rates.t;
  p.q_samples = q_rates.q;
  p.r_samples = r_rates.q;
  return p;
}

ExactSolution exact_solve(const PropagationNetwork& net, const NodeSet& sources,
                          const std::vector<double>& time_grid,
                          OracleOptions opts) {
  if (time_grid.empty()) throw std::invalid_argument("empty time grid");
  if (!std::is_sorted(time_grid.begin(), time_grid.end()))
    throw std::invalid_argument("time grid must be nondecreasing");
  const NodeId n = net.node_count();
  FullChain chain(net, opts.state_limit);

  std::size_t init = 0;
  for (NodeId s : sources) {
    if (s >= n) throw std::domain_error("source id out of range");
    init |= std::size_t{1} << s;
  }

  ExactSolution sol;
  sol.density.t = time_grid;
  sol.q_rates.t = time_grid;
  sol.r_rates.t = time_grid;

  std::vector<double> pi(chain.state_count, 0.0);
  pi[init] = 1.0;
  double t = 0;
  for (double target : time_grid) {
    chain.step(pi, target - t, opts.tail_tolerance);
    t = target;

    std::vector<double> rho(n + 1, 0.0), qflux(n + 1, 0.0), rflux(n + 1, 0.0);
    for (std::size_t mask = 0; mask < chain.state_count; ++mask) {
      int k = std::popcount(mask);
      rho[k] += pi[mask];
      qflux[k] += pi[mask] * chain.act_total[mask];
      rflux[k] += pi[mask] * chain.rec_total[mask];
    }
    std::vector<double> qrow(n + 1, kNaN), rrow(n + 1, kNaN);
    for (NodeId k = 0; k <= n; ++k) {
      if (rho[k] >= opts.rho_threshold) {
        qrow[k] = qflux[k] / rho[k];
        rrow[k] = rflux[k] / rho[k];
      }
    }
    qrow[n] = 0.0;  // M_K has no forward transition
    rrow[0] = 0.0;
    sol.density.rho.push_back(std::move(rho));
    sol.q_rates.q.push_back(std::move(qrow));
    sol.r_rates.q.push_back(std::move(rrow));
    if (opts.keep_raw) sol.raw.push_back(pi);
  }
  return sol;
}

bool BoundReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](char c) { return c != 0; });
}

BoundReport verify_bounds(const PropagationNetwork& net, const NodeSet& sources,
                          const RateProfile& estimated, double epsilon,
                          const std::vector<double>& time_grid,
                          OracleOptions opts) {
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("epsilon must be in (0,1)");
  const NodeId n = net.node_count();
  ExactSolution exact = exact_solve(net, sources, time_grid, opts);

  BoundReport report;
  report.epsilon = epsilon;
  report.alpha_max = net.max_edge_rate();
  report.alpha_min = net.min_edge_rate();
  report.max_out_degree = net.max_out_degree();
  report.t = time_grid;

  double q_bar = 0;
  for (const auto& row : exact.q_rates.q)
    for (NodeId k = 0; k < n; ++k)
      if (!std::isnan(row[k])) q_bar = std::max(q_bar, row[k]);
  report.q_bar = q_bar;

  const double cap = epsilon / (2.0 + epsilon);
  const double log_term = std::log1p(epsilon / 2.0);
  std::vector<double> qhat;
  bool hyp_all = true;
  for (std::size_t m = 0; m < time_grid.size(); ++m) {
    const double t = time_grid[m];
    estimated.q_at(t, qhat);
    std::vector<double> drow(n, kNaN), trow(n, kNaN);
    bool ok = true;
    for (NodeId k = 0; k < n; ++k) {
      double denom = report.alpha_max * static_cast<double>(k) * t *
                     std::min<double>(report.max_out_degree, n - k);
      trow[k] = denom > 0 ? std::min(log_term / denom, cap) : cap;
      double qk = exact.q_rates.q[m][k];
      if (std::isnan(qk) || qk <= 0) continue;
      double est = k < qhat.size() ? qhat[k] : 0.0;
      drow[k] = std::abs(est - qk) / qk;
      if (drow[k] > trow[k]) ok = false;
    }
    report.delta.push_back(std::move(drow));
    report.threshold.push_back(std::move(trow));
    report.hypothesis_ok.push_back(ok ? 1 : 0);
    if (!ok) hyp_all = false;
  }

  // Predicted influence with the estimated rates vs the exact influence.
  auto rho0 = initial_distribution(n + 1, sources.size());
  DensityTable predicted =
      estimated.kind == RateProfile::Kind::constant
          ? solve_expm_grid(estimated, rho0, time_grid)
          : solve_rk4(estimated, rho0, time_grid);
  const double factor = std::pow(1.0 + epsilon, n) - 1.0;
  for (std::size_t m = 0; m < time_grid.size(); ++m) {
    double sigma = influence(exact.density.rho[m]);
    double sigma_hat = influence(predicted.rho[m]);
    double err = sigma > 0 ? std::abs(sigma_hat - sigma) / sigma : 0.0;
    report.influence_error.push_back(err);

    // c_K(t) = (1/K) sum_{j<K} (K-j)/j! (q_bar t)^j
    double ck = 0, term = 1;  // term = (q_bar t)^j / j!
    for (NodeId j = 0; j < n; ++j) {
      ck += static_cast<double>(n - j) * term;
      term *= q_bar * time_grid[m] / static_cast<double>(j + 1);
    }
    ck /= static_cast<double>(n);
    double env = factor * std::min(1.0, ck * std::exp(-report.alpha_min *
                                                      time_grid[m]));
    report.envelope.push_back(env);
    bool asserted = hyp_all;
    report.pass.push_back(
        (!asserted || err <= env * (1 + 1e-9) + 1e-12) ? 1 : 0);
  }
  return report;
}

}  // namespace influx
