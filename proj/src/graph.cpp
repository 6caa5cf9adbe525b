#include "influx/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace influx {

namespace {

std::vector<double> padded(std::vector<double> v, NodeId n, const char* what) {
  if (v.empty()) return std::vector<double>(n, 0.0);
  if (v.size() != n)
    throw std::invalid_argument(std::string(what) + " vector size mismatch");
  for (double x : v)
    if (x < 0) throw std::invalid_argument(std::string(what) + " rate < 0");
  return v;
}

}  // namespace

PropagationNetwork::PropagationNetwork(NodeId node_count,
                                       std::vector<Edge> edges,
                                       std::vector<double> self_rates,
                                       std::vector<double> recovery_rates)
    : node_count_(node_count) {
  if (node_count == 0) throw std::invalid_argument("node_count must be >= 1");
  self_rate_ = padded(std::move(self_rates), node_count, "self");
  recovery_rate_ = padded(std::move(recovery_rates), node_count, "recovery");
  for (double b : self_rate_) total_self_rate_ += b;
  for (double g : recovery_rate_) total_recovery_rate_ += g;

  std::vector<std::size_t> out_count(node_count, 0), in_count(node_count, 0);
  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("self-loop edge rejected");
    if (!(e.rate > 0)) throw std::invalid_argument("edge rate must be > 0");
    ++out_count[e.src];
    ++in_count[e.dst];
  }

  // Stable counting sort by src keeps canonical insertion order per node.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.src < b.src; });

  out_offset_.assign(node_count + 1, 0);
  in_offset_.assign(node_count + 1, 0);
  for (NodeId i = 0; i < node_count; ++i) {
    out_offset_[i + 1] = out_offset_[i] + out_count[i];
    in_offset_[i + 1] = in_offset_[i] + in_count[i];
    max_out_degree_ = std::max(max_out_degree_, out_count[i]);
  }

  out_target_.resize(edges.size());
  out_rate_.resize(edges.size());
  in_source_.resize(edges.size());
  in_rate_.resize(edges.size());
  std::vector<std::size_t> out_pos(out_offset_.begin(), out_offset_.end() - 1);
  std::vector<std::size_t> in_pos(in_offset_.begin(), in_offset_.end() - 1);
  for (const Edge& e : edges) {
    out_target_[out_pos[e.src]] = e.dst;
    out_rate_[out_pos[e.src]++] = e.rate;
    in_source_[in_pos[e.dst]] = e.src;
    in_rate_[in_pos[e.dst]++] = e.rate;
    max_edge_rate_ = std::max(max_edge_rate_, e.rate);
    min_edge_rate_ = std::min(min_edge_rate_, e.rate);
  }

  // Duplicate (src,dst) detection: a data problem, not multigraph semantics.
  std::vector<NodeId> targets;
  for (NodeId i = 0; i < node_count; ++i) {
    targets.assign(out_target_.begin() + out_offset_[i],
                   out_target_.begin() + out_offset_[i + 1]);
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
      throw std::invalid_argument("duplicate edge rejected");
  }
}

std::vector<Edge> PropagationNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(out_target_.size());
  for (NodeId i = 0; i < node_count_; ++i)
    for (std::size_t k = out_offset_[i]; k < out_offset_[i + 1]; ++k)
      out.push_back({i, out_target_[k], out_rate_[k]});
  return out;
}

PropagationNetwork PropagationNetwork::with_rates(
    const std::vector<double>& rates) const {
  std::vector<Edge> es = edges();
  if (rates.size() != es.size())
    throw std::invalid_argument("rate vector size mismatch");
  for (std::size_t k = 0; k < es.size(); ++k) es[k].rate = rates[k];
  return PropagationNetwork(node_count_, std::move(es), self_rate_,
                            recovery_rate_);
}

void PropagationNetwork::check_node(NodeId i) const {
  if (i >= node_count_) throw std::domain_error("node id out of range");
}

double frontier_rate(const PropagationNetwork& net, const NodeSet& active) {
  if (!active.empty() && active.max_id() >= net.node_count())
    throw std::domain_error("node id out of range");
  double total = 0;
  for (NodeId i : active) {
    for (std::size_t k = net.out_offsets()[i]; k < net.out_offsets()[i + 1];
         ++k) {
      if (!active.contains(net.out_targets()[k])) total += net.out_rates()[k];
    }
  }
  return total;
}

double aggregate_self_rate(const PropagationNetwork& net,
                           const NodeSet& nodes) {
  double total = 0;
  for (NodeId i : nodes) {
    if (i >= net.node_count()) throw std::domain_error("node id out of range");
    total += net.self_rate(i);
  }
  return total;
}

double aggregate_recovery_rate(const PropagationNetwork& net,
                               const NodeSet& nodes) {
  double total = 0;
  for (NodeId i : nodes) {
    if (i >= net.node_count()) throw std::domain_error("node id out of range");
    total += net.recovery_rate(i);
  }
  return total;
}

std::vector<double> shortest_activation_distances(const PropagationNetwork& net,
                                                  const NodeSet& sources,
                                                  DistanceOptions opts) {
  if (!sources.empty() && sources.max_id() >= net.node_count())
    throw std::domain_error("source id out of range");
  if (sources.empty() && !(opts.use_self_activation && net.has_self_activation()))
    throw std::invalid_argument(
        "empty source set without self-activation: no propagation possible");

  const NodeId n = net.node_count();
  std::vector<double> dist(n, kInfDistance);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeId s : sources) {
    dist[s] = 0;
    heap.emplace(0.0, s);
  }
  if (opts.use_self_activation) {
    for (NodeId i = 0; i < n; ++i) {
      if (net.self_rate(i) > 0) {
        double d = 1.0 / net.self_rate(i);
        if (d < dist[i]) {
          dist[i] = d;
          heap.emplace(d, i);
        }
      }
    }
  }
  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i]) continue;
    for (std::size_t k = net.out_offsets()[i]; k < net.out_offsets()[i + 1];
         ++k) {
      NodeId j = net.out_targets()[k];
      double nd = d + 1.0 / net.out_rates()[k];
      if (nd < dist[j]) {
        dist[j] = nd;
        heap.emplace(nd, j);
      }
    }
  }
  return dist;
}

std::vector<NodeId> ascending_activation_order(
    const std::vector<double>& distances) {
  std::vector<NodeId> order(distances.size());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (distances[a] != distances[b]) return distances[a] < distances[b];
    return a < b;
  });
  return order;
}

}  // namespace influx
