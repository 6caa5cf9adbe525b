#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
// Randomized invariant checks across modules: properties that must hold for
// every network, source set, and seed, regardless of the specific numbers.
#include <cmath>
#include <vector>

#include "doctest.h"
#include "influx/fpe.hpp"
#include "influx/gen.hpp"
#include "influx/graph.hpp"
#include "influx/rng.hpp"
#include "influx/sim.hpp"

using namespace influx;

namespace {

PropagationNetwork random_case(std::uint64_t seed, NodeId& k_out,
                               NodeSet& sources_out) {
  Rng rng(seed);
  NodeId k = 3 + static_cast<NodeId>(rng.below(10));
  std::vector<Edge> edges;
  for (NodeId i = 0; i < k; ++i)
    for (NodeId j = 0; j < k; ++j)
      if (i != j && rng.bernoulli(0.3))
        edges.push_back({i, j, rng.uniform_open(0.1, 2.0)});
  std::vector<double> beta(k, 0.0), gamma(k, 0.0);
  bool self = rng.bernoulli(0.5), rec = rng.bernoulli(0.5);
  for (NodeId i = 0; i < k; ++i) {
    if (self && rng.bernoulli(0.5)) beta[i] = rng.uniform_open(0.05, 0.5);
    if (rec && rng.bernoulli(0.5)) gamma[i] = rng.uniform_open(0.05, 0.5);
  }
  std::vector<NodeId> srcs;
  srcs.push_back(static_cast<NodeId>(rng.below(k)));
  if (rng.bernoulli(0.4)) srcs.push_back(static_cast<NodeId>(rng.below(k)));
  k_out = k;
  sources_out = NodeSet(srcs);
  return PropagationNetwork(k, std::move(edges), std::move(beta),
                            std::move(gamma));
}

}  // namespace

TEST_CASE("probability is conserved through every solver path") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    NodeId k;
    NodeSet sources;
    auto net = random_case(seed, k, sources);
    auto grid = uniform_grid(3.0, 15);
    for (Method method : {Method::dist, Method::tree}) {
      PredictOptions opts;
      opts.method = method;
      opts.tree_width = 16;
      auto p = predict(net, sources, grid, opts);
      for (const auto& row : p.density.rho) {
        double sum = 0;
        for (double v : row) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0 + 1e-12);
          sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("without recovery the activation count is stochastically monotone") {
  for (std::uint64_t seed = 30; seed <= 40; ++seed) {
    Rng rng(seed);
    NodeId k = 4 + static_cast<NodeId>(rng.below(8));
    std::vector<Edge> edges;
    for (NodeId i = 0; i < k; ++i)
      for (NodeId j = 0; j < k; ++j)
        if (i != j && rng.bernoulli(0.3))
          edges.push_back({i, j, rng.uniform_open(0.1, 2.0)});
    PropagationNetwork net(k, std::move(edges));
    auto p = predict(net, NodeSet{0}, uniform_grid(4.0, 20));
    // tail mass Pr[count > c] never decreases in time for a pure-birth chain
    for (std::size_t c = 0; c <= k; ++c) {
      double prev = -1;
      for (const auto& row : p.density.rho) {
        double tail = 0;
        for (std::size_t j = c; j < row.size(); ++j) tail += row[j];
        CHECK(tail >= prev - 1e-9);
        prev = tail;
      }
    }
  }
}

TEST_CASE("estimated rate profiles have legal boundary structure") {
  for (std::uint64_t seed = 50; seed <= 65; ++seed) {
    NodeId k;
    NodeSet sources;
    auto net = random_case(seed, k, sources);
    auto pd = rates_dist(net, sources);
    auto pt = rates_tree(net, sources, 8).profile;
    for (const RateProfile* p : {&pd, &pt}) {
      REQUIRE(p->q.size() == static_cast<std::size_t>(k) + 1);
      CHECK(p->q.back() == 0.0);   // no birth out of the full state
      CHECK(p->r.front() == 0.0);  // no death out of the empty state
      for (double v : p->q) CHECK(v >= 0.0);
      for (double v : p->r) CHECK(v >= 0.0);
      for (std::size_t j = 0; j < sources.size(); ++j)
        CHECK(p->q[j] == 0.0);  // counts below the source size are never left
    }
  }
}

TEST_CASE("simulated cascades respect the network structure") {
  for (std::uint64_t seed = 70; seed <= 80; ++seed) {
    NodeId k;
    NodeSet sources;
    auto net = random_case(seed, k, sources);
    auto cascades = run_ensemble(net, sources, 3.0, 20, seed, 0);
    for (const auto& c : cascades) {
      std::vector<int> active(k, 0);
      for (const auto& ev : c.events) {
        if (ev.kind == EventKind::recover) {
          active[ev.node] = 0;
          continue;
        }
        // every activation is a source, self-activation, or has an active
        // in-neighbor at that instant
        bool explainable = sources.contains(ev.node) && ev.time == 0.0;
        if (net.self_rate(ev.node) > 0) explainable = true;
        const auto& off = net.in_offsets();
        for (std::size_t e = off[ev.node]; e < off[ev.node + 1]; ++e)
          if (active[net.in_sources()[e]]) explainable = true;
        CHECK(explainable);
        active[ev.node] = 1;
      }
    }
  }
}

TEST_CASE("predictions are invariant under node relabeling") {
  // reversing the node ids must not change the influence curve
  Rng rng(91);
  NodeId k = 9;
  std::vector<Edge> fwd, rev;
  for (NodeId i = 0; i < k; ++i)
    for (NodeId j = 0; j < k; ++j)
      if (i != j && rng.bernoulli(0.3)) {
        double rate = rng.uniform_open(0.2, 1.5);
        fwd.push_back({i, j, rate});
        rev.push_back({k - 1 - i, k - 1 - j, rate});
      }
  PropagationNetwork a(k, std::move(fwd)), b(k, std::move(rev));
  auto grid = uniform_grid(4.0, 20);
  auto pa = predict(a, NodeSet{0}, grid);
  auto pb = predict(b, NodeSet{k - 1}, grid);
  for (std::size_t m = 0; m < grid.size(); ++m)
    CHECK(pa.curve.value[m] == doctest::Approx(pb.curve.value[m]).epsilon(1e-10));
}

TEST_CASE("scaling all rates rescales time in the prediction") {
  // doubling every rate must halve the time to reach any influence level
  Rng rng(95);
  NodeId k = 8;
  std::vector<Edge> base;
  for (NodeId i = 0; i < k; ++i)
    for (NodeId j = 0; j < k; ++j)
      if (i != j && rng.bernoulli(0.35))
        base.push_back({i, j, rng.uniform_open(0.2, 1.5)});
  auto doubled = base;
  for (Edge& e : doubled) e.rate *= 2;
  PropagationNetwork a(k, std::vector<Edge>(base)), b(k, std::move(doubled));
  auto slow = predict(a, NodeSet{0}, uniform_grid(4.0, 21));
  auto fast = predict(b, NodeSet{0}, uniform_grid(2.0, 21));
  for (std::size_t m = 0; m < slow.curve.t.size(); ++m)
    CHECK(slow.curve.value[m] ==
          doctest::Approx(fast.curve.value[m]).epsilon(1e-8));
}

TEST_CASE("generated families always produce loadable, legal networks") {
  std::vector<GeneratorSpec> specs(4);
  specs[0].family = Family::erdos_renyi;
  specs[0].node_count = 30;
  specs[0].avg_degree = 4;
  specs[1].family = Family::small_world;
  specs[1].node_count = 30;
  specs[1].ring_degree = 4;
  specs[1].rewire_prob = 0.3;
  specs[2].family = Family::scale_free;
  specs[2].node_count = 30;
  specs[2].attach_count = 2;
  specs[3].family = Family::kronecker;
  specs[3].kron_seed = {{0.9, 0.5}, {0.5, 0.2}};
  specs[3].kron_power = 5;
  specs[3].node_count = 32;
  for (auto spec : specs) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      spec.seed = seed;
      auto net = sample_rates(generate(spec), seed, 0.1, 1.0);
      CHECK(net.node_count() == spec.node_count);
      for (const Edge& e : net.edges()) {
        CHECK(e.src != e.dst);
        CHECK(e.rate > 0.1);
        CHECK(e.rate < 1.0);
      }
    }
  }
}
