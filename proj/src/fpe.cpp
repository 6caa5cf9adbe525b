#include "influx/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

namespace influx {

namespace {

double interp_entry(double a, double b, double w) {
  bool na = std::isnan(a), nb = std::isnan(b);
  if (na && nb) return 0.0;
  if (na) return b;
  if (nb) return a;
  return a + w * (b - a);
}

void sample_at(const std::vector<double>& time,
               const std::vector<std::vector<double>>& rows, double t,
               std::vector<double>& out) {
  out.resize(rows.front().size());
  if (t <= time.front()) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      double v = rows.front()[k];
      out[k] = std::isnan(v) ? 0.0 : v;
    }
    return;
  }
  if (t >= time.back()) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      double v = rows.back()[k];
      out[k] = std::isnan(v) ? 0.0 : v;
    }
    return;
  }
  auto it = std::upper_bound(time.begin(), time.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - time.begin());
  std::size_t lo = hi - 1;
  double w = (t - time[lo]) / (time[hi] - time[lo]);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = interp_entry(rows[lo][k], rows[hi][k], w);
}

void fill_rows(std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return;
  const std::size_t n = rows.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    // forward fill, then backward fill, then zero
    double last = std::numeric_limits<double>::quiet_NaN();
    for (auto& row : rows) {
      if (std::isnan(row[k])) row[k] = last;
      else last = row[k];
    }
    last = std::numeric_limits<double>::quiet_NaN();
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      if (std::isnan((*it)[k])) (*it)[k] = last;
      else last = (*it)[k];
    }
    for (auto& row : rows)
      if (std::isnan(row[k])) row[k] = 0.0;
  }
}

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isnan(x) && x < 0)
      throw std::invalid_argument(std::string(what) + " rate < 0");
}

}  // namespace

bool RateProfile::has_recovery() const {
  auto any_pos = [](const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(),
                       [](double x) { return !std::isnan(x) && x > 0; });
  };
  if (kind == Kind::constant) return any_pos(r);
  for (const auto& row : r_samples)
    if (any_pos(row)) return true;
  return false;
}

void RateProfile::q_at(double t, std::vector<double>& out) const {
  if (kind == Kind::constant) {
    out = q;
    return;
  }
  sample_at(time, q_samples, t, out);
}

void RateProfile::r_at(double t, std::vector<double>& out) const {
  if (kind == Kind::constant) {
    out = r;
    return;
  }
  if (r_samples.empty()) {
    out.assign(states(), 0.0);
    return;
  }
  sample_at(time, r_samples, t, out);
}

void RateProfile::fill_undefined() {
  if (kind != Kind::sampled) return;
  fill_rows(q_samples);
  fill_rows(r_samples);
}

RateProfile RateProfile::constant(std::vector<double> q,
                                  std::vector<double> r) {
  RateProfile p;
  p.kind = Kind::constant;
  if (r.empty()) r.assign(q.size(), 0.0);
  if (q.size() != r.size()) throw std::invalid_argument("q/r size mismatch");
  if (q.empty()) throw std::invalid_argument("empty profile");
  check_nonnegative(q, "q");
  check_nonnegative(r, "r");
  if (q.back() != 0) throw std::invalid_argument("q_K must be 0");
  if (r.front() != 0) throw std::invalid_argument("r_0 must be 0");
  p.q = std::move(q);
  p.r = std::move(r);
  return p;
}

std::vector<double> initial_distribution(std::size_t states,
                                         std::size_t source_count) {
  if (source_count >= states)
    throw std::invalid_argument("source count out of range");
  std::vector<double> rho(states, 0.0);
  rho[source_count] = 1.0;
  return rho;
}

// ---------------------------------------------------------------------------
// Rate estimators
// ---------------------------------------------------------------------------

RateProfile rates_dist(const PropagationNetwork& net, const NodeSet& sources) {
  const NodeId n = net.node_count();
  DistanceOptions dopts{.use_self_activation = net.has_self_activation()};
  auto dist = shortest_activation_distances(net, sources, dopts);
  auto order = ascending_activation_order(dist);
  std::size_t reachable = 0;
  for (double d : dist)
    if (d < kInfDistance) ++reachable;

  std::vector<double> q(n + 1, 0.0), r(n + 1, 0.0);
  std::vector<char> active(n, 0);
  double cur_alpha = 0;  // alpha(U) for the current prefix U
  double beta_comp = net.total_self_rate();
  double gamma_sum = 0;
  const std::size_t s = sources.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= s) q[k] = (k < reachable ? cur_alpha : 0.0) + beta_comp;
    // Extend the prefix by the next node in activation order.
    NodeId v = order[k];
    active[v] = 1;
    beta_comp -= net.self_rate(v);
    gamma_sum += net.recovery_rate(v);
    r[k + 1] = gamma_sum;
    // alpha(U + v) = alpha(U) - alpha(v|U) + (rates v -> inactive)
    for (std::size_t e = net.in_offsets()[v]; e < net.in_offsets()[v + 1]; ++e)
      if (active[net.in_sources()[e]]) cur_alpha -= net.in_rates()[e];
    for (std::size_t e = net.out_offsets()[v]; e < net.out_offsets()[v + 1];
         ++e)
      if (!active[net.out_targets()[e]]) cur_alpha += net.out_rates()[e];
  }
  if (!net.has_recovery()) std::fill(r.begin(), r.end(), 0.0);
  return RateProfile::constant(std::move(q), std::move(r));
}

namespace {

struct TreeCandidate {
  std::vector<NodeId> members;  // sorted
  double prob;
};

// alpha(U) + beta(U^c) and the frontier branch weights alpha(j|U) + beta_j.
double candidate_weight(const PropagationNetwork& net,
                        const std::vector<NodeId>& members,
                        std::map<NodeId, double>* branch) {
  auto in_set = [&](NodeId v) {
    return std::binary_search(members.begin(), members.end(), v);
  };
  double w = net.total_self_rate();
  for (NodeId i : members) w -= net.self_rate(i);
  if (branch) {
    for (NodeId j = 0; j < net.node_count(); ++j)
      if (!in_set(j) && net.self_rate(j) > 0) (*branch)[j] = net.self_rate(j);
  }
  for (NodeId i : members) {
    for (std::size_t e = net.out_offsets()[i]; e < net.out_offsets()[i + 1];
         ++e) {
      NodeId j = net.out_targets()[e];
      if (in_set(j)) continue;
      w += net.out_rates()[e];
      if (branch) (*branch)[j] += net.out_rates()[e];
    }
  }
  return w;
}

}  // namespace

TreeRates rates_tree(const PropagationNetwork& net, const NodeSet& sources,
                     std::size_t width) {
  if (width == 0) throw std::invalid_argument("tree width must be >= 1");
  if (sources.empty() && !net.has_self_activation())
    throw std::invalid_argument("empty source set without self-activation");
  const NodeId n = net.node_count();
  const std::size_t s = sources.size();

  TreeRates result;
  result.retained_mass.assign(n + 1, 1.0);
  std::vector<double> q(n + 1, 0.0), r(n + 1, 0.0);

  std::vector<TreeCandidate> layer{{sources.ids(), 1.0}};
  for (std::size_t k = s; k < n; ++k) {
    // q[k] from the current layer, renormalized over retained mass.
    double mass = 0, acc = 0, gacc = 0;
    for (const auto& cand : layer) {
      mass += cand.prob;
      acc += cand.prob * candidate_weight(net, cand.members, nullptr);
      double g = 0;
      for (NodeId i : cand.members) g += net.recovery_rate(i);
      gacc += cand.prob * g;
    }
    if (mass > 0) {
      q[k] = acc / mass;
      if (k > 0) r[k] = gacc / mass;
    }

    // Branch every candidate by each frontier neighbor; merge duplicates.
    std::map<std::vector<NodeId>, double> next;
    double produced = 0;
    for (const auto& cand : layer) {
      std::map<NodeId, double> branch;
      candidate_weight(net, cand.members, &branch);
      double total = 0;
      for (auto& [j, a] : branch) total += a;
      if (total <= 0) continue;  // dead end, mass lost
      for (auto& [j, a] : branch) {
        std::vector<NodeId> child = cand.members;
        child.insert(std::lower_bound(child.begin(), child.end(), j), j);
        double p = cand.prob * a / total;
        next[std::move(child)] += p;
        produced += p;
      }
    }
    std::vector<TreeCandidate> sorted;
    sorted.reserve(next.size());
    for (auto& [members, p] : next)
      sorted.push_back({members, p});
    // Descending probability; equal probabilities lexicographic by ids
    // (the map iteration order), kept stable.
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TreeCandidate& a, const TreeCandidate& b) {
                       return a.prob > b.prob;
                     });
    if (sorted.size() > width) sorted.resize(width);
    double kept = 0;
    for (const auto& c : sorted) kept += c.prob;
    result.retained_mass[k + 1] = produced > 0 ? kept / produced : 0.0;
    layer = std::move(sorted);
    if (layer.empty()) break;
  }
  if (!net.has_recovery()) std::fill(r.begin(), r.end(), 0.0);
  result.profile = RateProfile::constant(std::move(q), std::move(r));
  return result;
}

// ---------------------------------------------------------------------------
// Generator and solvers
// ---------------------------------------------------------------------------

TridiagonalGenerator build_generator(const RateProfile& rates, double t) {
  std::vector<double> q, r;
  rates.q_at(t, q);
  rates.r_at(t, r);
  const std::size_t n = q.size();
  TridiagonalGenerator g;
  g.sub.assign(n, 0.0);
  g.main.assign(n, 0.0);
  g.super.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (q[j] < 0 || r[j] < 0)
      throw std::invalid_argument("negative rate in profile");
    g.main[j] = -(q[j] + r[j]);
    if (j + 1 < n) g.super[j] = q[j];
    if (j > 0) g.sub[j] = r[j];
  }
  return g;
}

namespace {

double max_total_rate(const RateProfile& rates) {
  double m = 0;
  auto scan = [&](const std::vector<double>& q, const std::vector<double>& r) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      double qq = std::isnan(q[j]) ? 0 : q[j];
      double rr = (j < r.size() && !std::isnan(r[j])) ? r[j] : 0;
      m = std::max(m, qq + rr);
    }
  };
  if (rates.kind == RateProfile::Kind::constant) {
    scan(rates.q, rates.r);
  } else {
    static const std::vector<double> none;
    for (std::size_t i = 0; i < rates.q_samples.size(); ++i)
      scan(rates.q_samples[i],
           rates.r_samples.empty() ? none : rates.r_samples[i]);
  }
  return m;
}

std::vector<double> sorted_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty time grid");
  std::vector<double> g = grid;
  if (!std::is_sorted(g.begin(), g.end()))
    throw std::invalid_argument("time grid must be nondecreasing");
  if (g.front() < 0) throw std::invalid_argument("negative time");
  return g;
}

}  // namespace

DensityTable solve_rk4(const RateProfile& rates,
                       const std::vector<double>& rho0,
                       const std::vector<double>& time_grid,
                       SolveOptions opts) {
  const std::size_t n = rates.states();
  if (rho0.size() != n) throw std::invalid_argument("rho0 size mismatch");
  auto grid = sorted_grid(time_grid);

  double h = opts.step;
  if (h <= 0) {
    double m = max_total_rate(rates);
    h = m > 0 ? 0.1 / m : (grid.back() > 0 ? grid.back() / 100 : 1.0);
  }
  const bool constant = rates.kind == RateProfile::Kind::constant;
  const auto exec = opts.exec;

  DensityTable out;
  out.t = grid;
  out.rho.reserve(grid.size());

  std::vector<double> rho = rho0;
  std::vector<double> work(n), k1(n), k2(n), k3(n), k4(n), qbuf, rbuf, qh, rh;
  double t = 0;

  double cached_h = -1;
  std::unique_ptr<kernels::BandedPropagator> prop;
  // Constant-profile steps defer renormalization: each apply folds the
  // previous step's 1/sum in as a scalar, avoiding a second sweep of rho.
  double pending_scale = 1.0;
  // Nonzero support window [wlo, whi): the banded step can only widen it by
  // 4 per side, so restricting the pass to the window is exact and keeps
  // each step O(support) instead of O(K).
  std::size_t wlo = 0, whi = n;
  if (constant) {
    while (wlo < n && rho[wlo] == 0.0) ++wlo;
    whi = n;
    while (whi > wlo && rho[whi - 1] == 0.0) --whi;
  }

  for (double target : grid) {
    double span = target - t;
    if (span < 0) throw std::logic_error("grid before current time");
    while (span > 1e-15 * std::max(1.0, target)) {
      std::size_t steps = static_cast<std::size_t>(std::ceil(span / h));
      double hs = span / static_cast<double>(steps);
      bool redo = false;
      std::vector<double> saved = rho;
      double saved_t = t;
      double saved_scale = pending_scale;
      std::size_t saved_wlo = wlo, saved_whi = whi;
      for (std::size_t sidx = 0; sidx < steps; ++sidx) {
        if (constant) {
          if (hs != cached_h) {
            prop = std::make_unique<kernels::BandedPropagator>(rates.q,
                                                               rates.r, hs);
            cached_h = hs;
          }
          wlo = wlo >= 4 ? wlo - 4 : 0;
          whi = std::min(n, whi + 4);
          double worst = 0;
          double sum = prop->apply_scaled(rho.data(), work.data(),
                                          pending_scale, exec, &worst, wlo,
                                          whi);
          rho.swap(work);
          if (worst < -opts.negative_tolerance || sum <= 0) {
            redo = true;
            break;
          }
          // The window only ever grows: write ranges then always cover any
          // stale entries left in the swapped-out buffer.
          pending_scale = 1.0 / sum;
          t += hs;
          continue;
        }
        {
          rates.q_at(t, qbuf);
          rates.r_at(t, rbuf);
          rates.q_at(t + hs / 2, qh);
          rates.r_at(t + hs / 2, rh);
          kernels::rk4_stage(qbuf.data(), rbuf.data(), rho.data(), nullptr,
                             0.0, k1.data(), n, exec);
          kernels::rk4_stage(qh.data(), rh.data(), rho.data(), k1.data(),
                             hs / 2, k2.data(), n, exec);
          kernels::rk4_stage(qh.data(), rh.data(), rho.data(), k2.data(),
                             hs / 2, k3.data(), n, exec);
          rates.q_at(t + hs, qbuf);
          rates.r_at(t + hs, rbuf);
          kernels::rk4_stage(qbuf.data(), rbuf.data(), rho.data(), k3.data(),
                             hs, k4.data(), n, exec);
          kernels::rk4_combine(rho.data(), k1.data(), k2.data(), k3.data(),
                               k4.data(), hs, n, exec);
        }
        t += hs;
        double worst = kernels::clip_and_renormalize(
            rho.data(), n, opts.negative_tolerance, exec);
        if (worst < -opts.negative_tolerance) {
          redo = true;
          break;
        }
      }
      if (redo) {
        if (h < 1e-12 * std::max(1.0, grid.back()))
          throw StabilityError(
              "RK4 step produced negative mass beyond tolerance; try step <= " +
                  format_double(h / 2),
              h / 2);
        h /= 2;
        rho = saved;
        t = saved_t;
        pending_scale = saved_scale;
        wlo = saved_wlo;
        whi = saved_whi;
        // the scratch buffer may hold nonzeros outside the restored window
        std::fill(work.begin(), work.end(), 0.0);
        span = target - t;
        continue;
      }
      t = target;  // absorb rounding drift across steps
      span = 0;
    }
    if (pending_scale != 1.0) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = rho[j] * pending_scale;
      out.rho.push_back(std::move(row));
    } else {
      out.rho.push_back(rho);
    }
  }
  return out;
}

std::vector<double> solve_expm(const RateProfile& rates,
                               const std::vector<double>& rho0, double t,
                               double tail_tolerance) {
  if (rates.kind != RateProfile::Kind::constant)
    throw std::invalid_argument(
        "matrix exponential requires a constant profile (use RK4)");
  const std::size_t n = rates.states();
  if (rho0.size() != n) throw std::invalid_argument("rho0 size mismatch");
  if (t < 0) throw std::invalid_argument("negative time");

  const std::vector<double>& q = rates.q;
  const std::vector<double>& r = rates.r;
  double theta = 0;
  for (std::size_t j = 0; j < n; ++j) theta = std::max(theta, q[j] + r[j]);
  std::vector<double> rho = rho0;
  if (theta == 0 || t == 0) return rho;

  // Uniformization in segments with theta * dt <= 32 so the leading
  // Poisson weight never underflows.
  std::size_t segments =
      static_cast<std::size_t>(std::ceil(theta * t / 32.0));
  segments = std::max<std::size_t>(segments, 1);
  const double dt = t / static_cast<double>(segments);
  const double a = theta * dt;

  std::vector<double> v(n), next(n), acc(n);
  for (std::size_t seg = 0; seg < segments; ++seg) {
    v = rho;
    double w = std::exp(-a);
    double wsum = w;
    for (std::size_t j = 0; j < n; ++j) acc[j] = w * v[j];
    std::size_t iter = 0;
    while (1.0 - wsum > tail_tolerance) {
      ++iter;
      // next = v P, P = I + A/theta
      for (std::size_t j = 0; j < n; ++j) {
        double d = -v[j] * (q[j] + r[j]);
        if (j > 0) d += v[j - 1] * q[j - 1];
        if (j + 1 < n) d += v[j + 1] * r[j + 1];
        next[j] = v[j] + d / theta;
      }
      v.swap(next);
      w *= a / static_cast<double>(iter);
      wsum += w;
      for (std::size_t j = 0; j < n; ++j) acc[j] += w * v[j];
      if (iter > 10000) break;  // tail underflow guard
    }
    rho = acc;
    kernels::clip_and_renormalize(rho.data(), n, 1e-9, kernels::Exec::serial);
  }
  return rho;
}

DensityTable solve_expm_grid(const RateProfile& rates,
                             const std::vector<double>& rho0,
                             const std::vector<double>& time_grid,
                             double tail_tolerance) {
  auto grid = sorted_grid(time_grid);
  DensityTable out;
  out.t = grid;
  std::vector<double> rho = rho0;
  double t = 0;
  for (double target : grid) {
    rho = solve_expm(rates, rho, target - t, tail_tolerance);
    t = target;
    out.rho.push_back(rho);
  }
  return out;
}

DensityTable solve_closed_form(const RateProfile& rates,
                               std::size_t source_count,
                               const std::vector<double>& time_grid,
                               std::size_t refine) {
  if (rates.kind != RateProfile::Kind::constant)
    throw std::invalid_argument("closed form requires a constant profile");
  if (rates.has_recovery())
    throw std::invalid_argument("closed form requires r == 0");
  auto grid = sorted_grid(time_grid);
  if (grid.size() < 2) throw std::invalid_argument("grid needs >= 2 points");
  if (grid.front() != 0)
    throw std::invalid_argument("closed form grid must start at 0");
  const double spacing = grid[1] - grid[0];
  for (std::size_t m = 1; m + 1 < grid.size(); ++m)
    if (std::abs(grid[m + 1] - grid[m] - spacing) > 1e-9 * spacing)
      throw std::invalid_argument("closed form requires a uniform grid");
  if (refine < 2) refine = 2;

  const std::size_t n = rates.states();
  if (source_count >= n)
    throw std::invalid_argument("source count out of range");
  const std::vector<double>& q = rates.q;

  const std::size_t fine = (grid.size() - 1) * refine;  // intervals
  const double delta = spacing / static_cast<double>(refine);

  // rho_k on the fine grid, built layer by layer from the nested-integral
  // recursion with two interleaved composite-Simpson chains.
  std::vector<std::vector<double>> layers(n,
                                          std::vector<double>(fine + 1, 0.0));
  for (std::size_t m = 0; m <= fine; ++m)
    layers[source_count][m] =
        std::exp(-q[source_count] * delta * static_cast<double>(m));

  for (std::size_t k = source_count; k + 1 < n; ++k) {
    const auto& lower = layers[k];
    auto& upper = layers[k + 1];
    const double qk = q[k];
    const double qn = q[k + 1];
    if (qk == 0) continue;  // no flow upward; layer stays zero
    const double e1 = std::exp(-qn * delta);
    const double e2 = e1 * e1;
    // Startup point m=1: Simpson over [0, delta] with a quadratically
    // interpolated midpoint of the lower layer.
    if (fine >= 2) {
      double mid = (3 * lower[0] + 6 * lower[1] - lower[2]) / 8.0;
      double emid = std::exp(-qn * delta / 2);
      upper[1] = delta / 6.0 *
                 (lower[0] * qk * e1 + 4 * mid * qk * emid + lower[1] * qk);
    } else {
      upper[1] = delta / 2.0 * (lower[0] * qk * e1 + lower[1] * qk);
    }
    for (std::size_t m = 2; m <= fine; ++m) {
      double integral = delta / 3.0 *
                        (lower[m - 2] * e2 + 4 * lower[m - 1] * e1 + lower[m]) *
                        qk;
      upper[m] = e2 * upper[m - 2] + integral;
    }
  }

  DensityTable out;
  out.t = grid;
  out.rho.reserve(grid.size());
  std::vector<double> row(n);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    for (std::size_t k = 0; k < n; ++k) row[k] = layers[k][m * refine];
    kernels::clip_and_renormalize(row.data(), n, 1e-9, kernels::Exec::serial);
    out.rho.push_back(row);
  }
  return out;
}

double influence(const std::vector<double>& rho) {
  double sigma = 0;
  for (std::size_t k = 0; k < rho.size(); ++k)
    sigma += static_cast<double>(k) * rho[k];
  return sigma;
}

Curve influence_curve(const DensityTable& density) {
  Curve c;
  c.t = density.t;
  c.value.reserve(density.rho.size());
  for (const auto& row : density.rho) c.value.push_back(influence(row));
  return c;
}

Prediction predict(const PropagationNetwork& net, const NodeSet& sources,
                   const std::vector<double>& time_grid, PredictOptions opts) {
  Prediction p;
  RateProfile profile;
  if (opts.method == Method::dist) {
    profile = rates_dist(net, sources);
    p.method_name = "dist";
  } else {
    TreeRates tr = rates_tree(net, sources, opts.tree_width);
    profile = std::move(tr.profile);
    p.retained_mass = std::move(tr.retained_mass);
    p.method_name = "tree(" + std::to_string(opts.tree_width) + ")";
  }
  auto rho0 = initial_distribution(profile.states(), sources.size());
  if (opts.solver == Solver::expm &&
      profile.kind == RateProfile::Kind::constant) {
    p.density = solve_expm_grid(profile, rho0, time_grid);
    p.solver_name = "expm";
  } else {
    p.density = solve_rk4(profile, rho0, time_grid, opts.solve);
    p.solver_name = "rk4";
  }
  p.curve = influence_curve(p.density);
  p.profile = std::move(profile);
  return p;
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (points < 2 || t_max <= 0)
    throw std::invalid_argument("grid needs t_max > 0 and >= 2 points");
  std::vector<double> g(points);
  for (std::size_t m = 0; m < points; ++m)
    g[m] = t_max * static_cast<double>(m) / static_cast<double>(points - 1);
  return g;
}

}  // namespace influx
