#include "influx/gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "influx/rng.hpp"

namespace influx {

std::string family_name(Family f) {
  switch (f) {
    case Family::erdos_renyi: return "er";
    case Family::small_world: return "sw";
    case Family::scale_free: return "sf";
    case Family::kronecker: return "kron";
  }
  throw std::logic_error("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "er" || name == "erdos_renyi") return Family::erdos_renyi;
  if (name == "sw" || name == "small_world") return Family::small_world;
  if (name == "sf" || name == "scale_free") return Family::scale_free;
  if (name == "kron" || name == "kronecker") return Family::kronecker;
  throw std::invalid_argument("unknown network family: " + name);
}

void GeneratorSpec::validate() const {
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  switch (family) {
    case Family::erdos_renyi:
      if (avg_degree < 0 || avg_degree >= node_count)
        throw std::invalid_argument("avg_degree must be in [0, K)");
      break;
    case Family::small_world:
      if (ring_degree % 2 != 0)
        throw std::invalid_argument("ring_degree must be even");
      if (ring_degree >= node_count)
        throw std::invalid_argument("ring_degree must be < K");
      if (rewire_prob < 0 || rewire_prob > 1)
        throw std::invalid_argument("rewire_prob must be in [0,1]");
      break;
    case Family::scale_free:
      if (attach_count < 1 || attach_count >= node_count)
        throw std::invalid_argument("attach_count must be in [1, K)");
      break;
    case Family::kronecker: {
      std::size_t dim = kron_seed.size();
      if (dim == 0 || kron_power == 0)
        throw std::invalid_argument("kronecker seed and power required");
      for (const auto& row : kron_seed) {
        if (row.size() != dim)
          throw std::invalid_argument("kronecker seed must be square");
        for (double p : row)
          if (p < 0 || p > 1)
            throw std::invalid_argument("kronecker entries must be in [0,1]");
      }
      std::size_t k = 1;
      for (std::size_t e = 0; e < kron_power; ++e) k *= dim;
      if (k != node_count)
        throw std::invalid_argument("node_count must equal dim^power");
      break;
    }
  }
}

namespace {

// Directed G(n,p) via geometric skips over the K*(K-1) ordered-pair space.
std::vector<Edge> gen_er(NodeId n, double avg_degree, Rng& rng) {
  std::vector<Edge> edges;
  if (n == 1 || avg_degree == 0) return edges;
  const double p = avg_degree / static_cast<double>(n - 1);
  const double log1mp = std::log1p(-p);
  const std::uint64_t pair_count =
      static_cast<std::uint64_t>(n) * (n - 1);
  std::uint64_t idx = 0;
  while (true) {
    double u = rng.uniform_open(0.0, 1.0);
    idx += 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / log1mp));
    if (idx > pair_count) break;
    std::uint64_t flat = idx - 1;
    NodeId i = static_cast<NodeId>(flat / (n - 1));
    NodeId j = static_cast<NodeId>(flat % (n - 1));
    if (j >= i) ++j;
    edges.push_back({i, j, 1.0});
  }
  return edges;
}

// Small-world ring with added shortcuts (Newman-Watts variant): the ring
// lattice stays intact, and each ring edge spawns a random shortcut with
// the given probability. Each undirected edge becomes two directed edges.
std::vector<Edge> gen_small_world(NodeId n, std::size_t ring_degree,
                                  double shortcut_prob, Rng& rng) {
  std::vector<std::unordered_set<NodeId>> adj(n);
  auto connected = [&](NodeId a, NodeId b) {
    return adj[a].contains(b) || adj[b].contains(a);
  };
  for (NodeId i = 0; i < n; ++i)
    for (std::size_t d = 1; d <= ring_degree / 2; ++d)
      adj[i].insert(static_cast<NodeId>((i + d) % n));

  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t d = 1; d <= ring_degree / 2; ++d) {
      if (!rng.bernoulli(shortcut_prob)) continue;
      // Pick a fresh endpoint; give up after a full sweep of tries.
      for (int tries = 0; tries < static_cast<int>(n); ++tries) {
        NodeId k = static_cast<NodeId>(rng.below(n));
        if (k == i || connected(i, k)) continue;
        adj[i].insert(k);
        break;
      }
    }
  }

  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    std::vector<NodeId> neighbors(adj[i].begin(), adj[i].end());
    std::sort(neighbors.begin(), neighbors.end());
    for (NodeId j : neighbors) {
      edges.push_back({i, j, 1.0});
      edges.push_back({j, i, 1.0});
    }
  }
  return edges;
}

// Preferential attachment: nodes 0..m-1 form a seed clique; each arriving
// node adds m out-edges to distinct targets drawn degree-proportionally.
std::vector<Edge> gen_scale_free(NodeId n, std::size_t m, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<NodeId> bag;  // one entry per attachment endpoint
  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j = 0; j < m; ++j) {
      if (i == j) continue;
      edges.push_back({i, j, 1.0});
    }
    bag.push_back(i);
  }
  std::vector<NodeId> chosen;
  for (NodeId v = static_cast<NodeId>(m); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      NodeId t = bag[rng.below(bag.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
        chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      // attachments are undirected: store both orientations so propagation
      // can travel either way along the link
      edges.push_back({v, t, 1.0});
      edges.push_back({t, v, 1.0});
      bag.push_back(t);
      bag.push_back(v);
    }
  }
  return edges;
}

std::vector<Edge> gen_kronecker(const GeneratorSpec& spec, Rng& rng) {
  const NodeId n = spec.node_count;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      double p = kronecker_edge_probability(spec.kron_seed, spec.kron_power,
                                            i, j);
      if (p > 0 && rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

}  // namespace

double kronecker_edge_probability(const std::vector<std::vector<double>>& seed,
                                  std::size_t power, std::size_t i,
                                  std::size_t j) {
  const std::size_t dim = seed.size();
  double p = 1.0;
  for (std::size_t e = 0; e < power; ++e) {
    p *= seed[i % dim][j % dim];
    i /= dim;
    j /= dim;
  }
  return p;
}

PropagationNetwork generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Edge> edges;
  switch (spec.family) {
    case Family::erdos_renyi:
      edges = gen_er(spec.node_count, spec.avg_degree, rng);
      break;
    case Family::small_world:
      edges = gen_small_world(spec.node_count, spec.ring_degree,
                              spec.rewire_prob, rng);
      break;
    case Family::scale_free:
      edges = gen_scale_free(spec.node_count, spec.attach_count, rng);
      break;
    case Family::kronecker:
      edges = gen_kronecker(spec, rng);
      break;
  }
  return PropagationNetwork(spec.node_count, std::move(edges));
}

PropagationNetwork sample_rates(const PropagationNetwork& net,
                                std::uint64_t seed, double lo, double hi) {
  if (lo < 0 || hi <= lo)
    throw std::invalid_argument("rate interval requires 0 <= lo < hi");
  Rng rng(seed, /*stream=*/1);
  std::vector<double> rates(net.edge_count());
  for (double& r : rates) r = rng.uniform_open(lo, hi);
  return net.with_rates(rates);
}

}  // namespace influx
