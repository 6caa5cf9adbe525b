#pragma once

#include <cstdint>
#include <vector>

#include "influx/graph.hpp"
#include "influx/io.hpp"
#include "influx/rng.hpp"

namespace influx {

enum class EventKind : std::uint8_t { activate, recover };

struct CascadeEvent {
  double time;
  NodeId node;
  EventKind kind;
};

/// One simulated propagation: timestamped events, nondecreasing in time,
/// starting with the time-0 activations of the source set.
struct Cascade {
  std::vector<CascadeEvent> events;
  NodeSet sources;
  double horizon;
};

/// Statistically exact Gillespie (direct method) sample path of the
/// continuous-time propagation up to `horizon`. Terminates early when the
/// total rate reaches zero.
Cascade simulate_cascade(const PropagationNetwork& net, const NodeSet& sources,
                         double horizon, Rng& rng);

/// n independent cascades with counter-based per-replica RNG streams:
/// replica i always uses stream i, so results are identical for any worker
/// count. workers == 0 means use the OpenMP default.
std::vector<Cascade> run_ensemble(const PropagationNetwork& net,
                                  const NodeSet& sources, double horizon,
                                  std::size_t n, std::uint64_t seed,
                                  int workers = 0);

/// Empirical state distribution over activation counts 0..K on the grid;
/// each row is a frequency vector summing to 1.
DensityTable empirical_density(const std::vector<Cascade>& cascades,
                               NodeId node_count,
                               const std::vector<double>& time_grid);

/// sigma-hat(t) = sum_k k rho-hat_k(t), computed from the density so the
/// identity holds exactly.
Curve empirical_influence(const std::vector<Cascade>& cascades,
                          NodeId node_count,
                          const std::vector<double>& time_grid);

/// Finite-difference extraction of q-hat_k(t) from an empirical density on
/// a uniform grid: q_k = -(sum_{j<=k} rho_j)' / rho_k, central differences.
/// Entries where rho-hat_k < min_probability are NaN (undefined).
RateTable empirical_rates(const DensityTable& density, double min_probability);

/// Per-cascade active count at time t.
std::size_t active_count_at(const Cascade& cascade, double t);

}  // namespace influx
