#include "influx/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace influx {

namespace {

/// Fenwick tree over per-node rates, supporting O(log K) updates and
/// inverse-CDF selection.
class RateTree {
 public:
  explicit RateTree(std::size_t n) : n_(n), tree_(n + 1, 0.0), value_(n, 0.0) {}

  double total() const { return total_; }
  double value(std::size_t i) const { return value_[i]; }

  void set(std::size_t i, double v) {
    double d = v - value_[i];
    if (d == 0) return;
    value_[i] = v;
    total_ += d;
    for (std::size_t k = i + 1; k <= n_; k += k & (~k + 1)) tree_[k] += d;
  }

  void add(std::size_t i, double d) { set(i, value_[i] + d); }

  /// Largest index whose prefix sum is <= target; clamps into the support.
  std::size_t select(double target) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while ((mask << 1) <= n_) mask <<= 1;
    for (; mask > 0; mask >>= 1) {
      std::size_t next = pos + mask;
      if (next <= n_ && tree_[next] < target) {
        pos = next;
        target -= tree_[next];
      }
    }
    // pos is in [0, n]; accumulated float drift can push the draw past the
    // last positive entry, so walk back onto the support.
    std::size_t i = std::min(pos, n_ - 1);
    while (i > 0 && value_[i] <= 0) --i;
    while (i + 1 < n_ && value_[i] <= 0) ++i;
    return i;
  }

 private:
  std::size_t n_;
  std::vector<double> tree_;
  std::vector<double> value_;
  double total_ = 0;
};

}  // namespace

Cascade simulate_cascade(const PropagationNetwork& net, const NodeSet& sources,
                         double horizon, Rng& rng) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be > 0");
  if (!sources.empty() && sources.max_id() >= net.node_count())
    throw std::domain_error("source id out of range");
  if (sources.empty() && !net.has_self_activation())
    throw std::invalid_argument(
        "empty source set with all self-rates zero: no propagation possible");

  const NodeId n = net.node_count();
  Cascade cascade;
  cascade.sources = sources;
  cascade.horizon = horizon;

  std::vector<char> active(n, 0);
  RateTree activation(n);  // per inactive node: alpha(j|U) + beta_j
  RateTree recovery(n);    // per active node: gamma_i

  for (NodeId j = 0; j < n; ++j)
    if (net.self_rate(j) > 0) activation.set(j, net.self_rate(j));

  auto activate = [&](NodeId v, double t) {
    active[v] = 1;
    cascade.events.push_back({t, v, EventKind::activate});
    activation.set(v, 0.0);
    if (net.recovery_rate(v) > 0) recovery.set(v, net.recovery_rate(v));
    for (std::size_t e = net.out_offsets()[v]; e < net.out_offsets()[v + 1];
         ++e) {
      NodeId j = net.out_targets()[e];
      if (!active[j]) activation.add(j, net.out_rates()[e]);
    }
  };
  auto recover = [&](NodeId v, double t) {
    active[v] = 0;
    cascade.events.push_back({t, v, EventKind::recover});
    recovery.set(v, 0.0);
    double lambda = net.self_rate(v);
    for (std::size_t e = net.in_offsets()[v]; e < net.in_offsets()[v + 1]; ++e)
      if (active[net.in_sources()[e]]) lambda += net.in_rates()[e];
    activation.set(v, lambda);
    for (std::size_t e = net.out_offsets()[v]; e < net.out_offsets()[v + 1];
         ++e) {
      NodeId j = net.out_targets()[e];
      if (!active[j]) activation.add(j, -net.out_rates()[e]);
    }
  };

  for (NodeId s : sources) activate(s, 0.0);

  double t = 0;
  while (true) {
    double total = activation.total() + recovery.total();
    if (total <= 0) break;
    t += rng.exponential(total);
    if (t > horizon) break;
    if (rng.uniform(0.0, total) < activation.total()) {
      NodeId v =
          static_cast<NodeId>(activation.select(rng.uniform(0.0, 1.0) *
                                                activation.total()));
      activate(v, t);
    } else {
      NodeId v = static_cast<NodeId>(
          recovery.select(rng.uniform(0.0, 1.0) * recovery.total()));
      recover(v, t);
    }
  }
  return cascade;
}

std::vector<Cascade> run_ensemble(const PropagationNetwork& net,
                                  const NodeSet& sources, double horizon,
                                  std::size_t n, std::uint64_t seed,
                                  int workers) {
  if (n < 1) throw std::invalid_argument("ensemble size must be >= 1");
  std::vector<Cascade> cascades(n);
#ifdef _OPENMP
  int prev = omp_get_max_threads();
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    cascades[i] = simulate_cascade(net, sources, horizon, rng);
  }
  if (workers > 0) omp_set_num_threads(prev);
#else
  (void)workers;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, i);
    cascades[i] = simulate_cascade(net, sources, horizon, rng);
  }
#endif
  return cascades;
}

std::size_t active_count_at(const Cascade& cascade, double t) {
  std::size_t count = 0;
  for (const auto& ev : cascade.events) {
    if (ev.time > t) break;
    if (ev.kind == EventKind::activate) ++count;
    else --count;
  }
  return count;
}

DensityTable empirical_density(const std::vector<Cascade>& cascades,
                               NodeId node_count,
                               const std::vector<double>& time_grid) {
  if (cascades.empty()) throw std::invalid_argument("empty ensemble");
  if (time_grid.empty()) throw std::invalid_argument("empty time grid");
  if (!std::is_sorted(time_grid.begin(), time_grid.end()))
    throw std::invalid_argument("time grid must be nondecreasing");

  const std::size_t states = node_count + 1;
  std::vector<std::vector<std::size_t>> counts(
      time_grid.size(), std::vector<std::size_t>(states, 0));
  for (const auto& cascade : cascades) {
    std::size_t active = 0;
    std::size_t ev = 0;
    for (std::size_t m = 0; m < time_grid.size(); ++m) {
      while (ev < cascade.events.size() &&
             cascade.events[ev].time <= time_grid[m]) {
        if (cascade.events[ev].kind == EventKind::activate) ++active;
        else --active;
        ++ev;
      }
      ++counts[m][active];
    }
  }
  DensityTable table;
  table.t = time_grid;
  table.rho.resize(time_grid.size());
  const double inv = 1.0 / static_cast<double>(cascades.size());
  for (std::size_t m = 0; m < time_grid.size(); ++m) {
    table.rho[m].resize(states);
    for (std::size_t k = 0; k < states; ++k)
      table.rho[m][k] = static_cast<double>(counts[m][k]) * inv;
  }
  return table;
}

Curve empirical_influence(const std::vector<Cascade>& cascades,
                          NodeId node_count,
                          const std::vector<double>& time_grid) {
  DensityTable density = empirical_density(cascades, node_count, time_grid);
  Curve c;
  c.t = density.t;
  c.value.reserve(density.t.size());
  for (const auto& row : density.rho) {
    double sigma = 0;
    for (std::size_t k = 0; k < row.size(); ++k)
      sigma += static_cast<double>(k) * row[k];
    c.value.push_back(sigma);
  }
  return c;
}

RateTable empirical_rates(const DensityTable& density, double min_probability) {
  const std::size_t m_count = density.t.size();
  if (m_count < 3)
    throw std::invalid_argument("empirical rates need >= 3 grid points");
  const double h = density.t[1] - density.t[0];
  for (std::size_t m = 1; m + 1 < m_count; ++m)
    if (std::abs(density.t[m + 1] - density.t[m] - h) > 1e-9 * h)
      throw std::invalid_argument("empirical rates require a uniform grid");

  const std::size_t states = density.rho.front().size();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // Cumulative head mass C_k(t) = sum_{j<=k} rho_j(t).
  std::vector<std::vector<double>> cum(m_count, std::vector<double>(states));
  for (std::size_t m = 0; m < m_count; ++m) {
    double acc = 0;
    for (std::size_t k = 0; k < states; ++k) {
      acc += density.rho[m][k];
      cum[m][k] = acc;
    }
  }

  RateTable table;
  table.t = density.t;
  table.q.assign(m_count, std::vector<double>(states - 1, nan));
  for (std::size_t m = 0; m < m_count; ++m) {
    // central differences; one-sided at the ends
    for (std::size_t k = 0; k + 1 < states; ++k) {
      double rho = density.rho[m][k];
      if (rho < min_probability) continue;
      double derivative;
      if (m == 0)
        derivative = (cum[1][k] - cum[0][k]) / h;
      else if (m + 1 == m_count)
        derivative = (cum[m][k] - cum[m - 1][k]) / h;
      else
        derivative = (cum[m + 1][k] - cum[m - 1][k]) / (2 * h);
      table.q[m][k] = -derivative / rho;
    }
  }
  return table;
}

}  // namespace influx
