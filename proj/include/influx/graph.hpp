#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "influx/node_set.hpp"

namespace influx {

constexpr double kInfDistance = std::numeric_limits<double>::infinity();

struct Edge {
  NodeId src;
  NodeId dst;
  double rate;  // activation rate alpha, > 0
};

/// Immutable weighted directed propagation network in compressed adjacency
/// form (out- and in-views). Safe for concurrent reads after construction.
class PropagationNetwork {
 public:
  /// Builds from an edge list. Rejects self-loops, duplicate (src,dst)
  /// pairs, nonpositive rates, and out-of-range ids.
  PropagationNetwork(NodeId node_count, std::vector<Edge> edges,
                     std::vector<double> self_rates = {},
                     std::vector<double> recovery_rates = {});

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return out_target_.size(); }

  // Out-edges of node i: targets/rates in [out_offset_[i], out_offset_[i+1]).
  std::size_t out_degree(NodeId i) const {
    return out_offset_[i + 1] - out_offset_[i];
  }
  std::size_t in_degree(NodeId j) const {
    return in_offset_[j + 1] - in_offset_[j];
  }

  const std::vector<std::size_t>& out_offsets() const { return out_offset_; }
  const std::vector<NodeId>& out_targets() const { return out_target_; }
  const std::vector<double>& out_rates() const { return out_rate_; }
  const std::vector<std::size_t>& in_offsets() const { return in_offset_; }
  const std::vector<NodeId>& in_sources() const { return in_source_; }
  const std::vector<double>& in_rates() const { return in_rate_; }

  double self_rate(NodeId i) const { return self_rate_[i]; }
  double recovery_rate(NodeId i) const { return recovery_rate_[i]; }
  const std::vector<double>& self_rates() const { return self_rate_; }
  const std::vector<double>& recovery_rates() const { return recovery_rate_; }
  bool has_self_activation() const { return total_self_rate_ > 0; }
  bool has_recovery() const { return total_recovery_rate_ > 0; }
  double total_self_rate() const { return total_self_rate_; }

  /// Edge list in canonical (src, then insertion) order.
  std::vector<Edge> edges() const;

  /// Largest activation rate over edges; 0 for the edgeless graph.
  double max_edge_rate() const { return max_edge_rate_; }
  /// Smallest activation rate over edges; +inf for the edgeless graph.
  double min_edge_rate() const { return min_edge_rate_; }
  std::size_t max_out_degree() const { return max_out_degree_; }

  /// Returns a copy with every edge rate replaced (same topology). `rates`
  /// must align with the canonical edge order of edges().
  PropagationNetwork with_rates(const std::vector<double>& rates) const;

 private:
  void check_node(NodeId i) const;

  NodeId node_count_;
  std::vector<std::size_t> out_offset_;
  std::vector<NodeId> out_target_;
  std::vector<double> out_rate_;
  std::vector<std::size_t> in_offset_;
  std::vector<NodeId> in_source_;
  std::vector<double> in_rate_;
  std::vector<double> self_rate_;
  std::vector<double> recovery_rate_;
  double total_self_rate_ = 0;
  double total_recovery_rate_ = 0;
  double max_edge_rate_ = 0;
  double min_edge_rate_ = kInfDistance;
  std::size_t max_out_degree_ = 0;

  friend double frontier_rate(const PropagationNetwork&, const NodeSet&);
};

/// alpha(U): total rate from activated set U into its unactivated
/// out-neighbors.
double frontier_rate(const PropagationNetwork& net, const NodeSet& active);

/// beta(U) and gamma(U): summed self-activation / recovery rates over U.
double aggregate_self_rate(const PropagationNetwork& net, const NodeSet& nodes);
double aggregate_recovery_rate(const PropagationNetwork& net,
                               const NodeSet& nodes);

struct DistanceOptions {
  /// When true, nodes with self_rate > 0 are additionally reachable from a
  /// virtual super-source at distance 1/beta_i.
  bool use_self_activation = false;
};

/// Multi-source Dijkstra on edge weights 1/alpha. Sources sit at distance 0;
/// unreachable nodes get +inf.
std::vector<double> shortest_activation_distances(
    const PropagationNetwork& net, const NodeSet& sources,
    DistanceOptions opts = {});

/// Nodes sorted by ascending distance, ties by ascending id; unreachable
/// nodes last.
std::vector<NodeId> ascending_activation_order(
    const std::vector<double>& distances);

}  // namespace influx
