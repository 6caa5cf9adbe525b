#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "influx/gen.hpp"

using namespace influx;

namespace {

GeneratorSpec er_spec(NodeId k, double deg, std::uint64_t seed) {
  GeneratorSpec s;
  s.family = Family::erdos_renyi;
  s.node_count = k;
  s.avg_degree = deg;
  s.seed = seed;
  return s;
}

bool same_edges(const PropagationNetwork& a, const PropagationNetwork& b) {
  auto ea = a.edges(), eb = b.edges();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (ea[i].src != eb[i].src || ea[i].dst != eb[i].dst ||
        ea[i].rate != eb[i].rate)
      return false;
  return true;
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (Family f : {Family::erdos_renyi, Family::small_world,
                   Family::scale_free, Family::kronecker})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS(family_from_name("nope"));
}

TEST_CASE("spec validation rejects bad parameters") {
  CHECK_THROWS(er_spec(0, 4, 1).validate());
  CHECK_THROWS(er_spec(10, -1, 1).validate());
  CHECK_THROWS(er_spec(10, 10, 1).validate());  // degree must be < K-1

  GeneratorSpec sw;
  sw.family = Family::small_world;
  sw.node_count = 10;
  sw.ring_degree = 3;  // must be even
  CHECK_THROWS(sw.validate());
  sw.ring_degree = 4;
  sw.rewire_prob = 1.5;
  CHECK_THROWS(sw.validate());
  sw.rewire_prob = 0.1;
  CHECK_NOTHROW(sw.validate());

  GeneratorSpec kr;
  kr.family = Family::kronecker;
  kr.kron_seed = {{0.9, 0.5}, {0.5, 0.3}};
  kr.kron_power = 3;
  kr.node_count = 7;  // must equal 2^3
  CHECK_THROWS(kr.validate());
  kr.node_count = 8;
  CHECK_NOTHROW(kr.validate());
  kr.kron_seed[0][0] = 1.5;  // probabilities must be in [0,1]
  CHECK_THROWS(kr.validate());
}

TEST_CASE("generation is deterministic per seed") {
  auto a = generate(er_spec(50, 6, 42));
  auto b = generate(er_spec(50, 6, 42));
  auto c = generate(er_spec(50, 6, 43));
  CHECK(same_edges(a, b));
  CHECK_FALSE(same_edges(a, c));
}

TEST_CASE("generated topologies have unit rates and no self-loops") {
  for (auto spec : {er_spec(40, 5, 1)}) {
    auto net = generate(spec);
    for (const Edge& e : net.edges()) {
      CHECK(e.rate == 1.0);
      CHECK(e.src != e.dst);
    }
  }
}

TEST_CASE("random-graph mean degree concentrates on the target") {
  // 200 nodes, expected out-degree 8: mean over 199 * 200 Bernoulli draws.
  double total = 0;
  int reps = 5;
  for (int rep = 0; rep < reps; ++rep)
    total += static_cast<double>(generate(er_spec(200, 8, 100 + rep)).edge_count());
  double mean_degree = total / (200.0 * reps);
  CHECK(mean_degree == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("small-world keeps the ring and adds shortcuts on top") {
  GeneratorSpec s;
  s.family = Family::small_world;
  s.node_count = 60;
  s.ring_degree = 4;
  s.rewire_prob = 0.2;
  s.seed = 7;
  auto net = generate(s);
  // the ring lattice is kept; shortcuts only add directed pairs
  CHECK(net.edge_count() >= 60 * 4);
  CHECK(net.edge_count() <= 60 * 4 + 2 * 60 * 2);  // at most one per ring edge
  std::set<std::pair<NodeId, NodeId>> have;
  for (const Edge& e : net.edges()) have.insert({e.src, e.dst});
  for (NodeId i = 0; i < 60; ++i) {  // ring edges all present, both ways
    CHECK(have.count({i, static_cast<NodeId>((i + 1) % 60)}) == 1);
    CHECK(have.count({static_cast<NodeId>((i + 1) % 60), i}) == 1);
  }
  // with no rewiring, every node links to its 2 neighbors each side
  s.rewire_prob = 0;
  auto ring = generate(s);
  CHECK(ring.edge_count() == 60 * 4);
  for (NodeId i = 0; i < 60; ++i) CHECK(ring.out_degree(i) == 4);
  // pure ring is symmetric: every directed edge has its reverse
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : ring.edges()) pairs.insert({e.src, e.dst});
  for (const Edge& e : ring.edges())
    CHECK(pairs.count({e.dst, e.src}) == 1);
}

TEST_CASE("scale-free attachment yields heavy in-degree skew") {
  GeneratorSpec s;
  s.family = Family::scale_free;
  s.node_count = 400;
  s.attach_count = 3;
  s.seed = 9;
  auto net = generate(s);
  std::vector<std::size_t> in_deg(400);
  for (NodeId i = 0; i < 400; ++i) in_deg[i] = net.in_degree(i);
  std::sort(in_deg.rbegin(), in_deg.rend());
  double top10 = 0, total = 0;
  for (std::size_t i = 0; i < in_deg.size(); ++i) {
    if (i < 40) top10 += static_cast<double>(in_deg[i]);
    total += static_cast<double>(in_deg[i]);
  }
  // preferential attachment concentrates well over the uniform 10% share
  CHECK(top10 / total > 0.25);
}

TEST_CASE("kronecker edge probabilities factor digit-wise") {
  std::vector<std::vector<double>> seed = {{0.9, 0.4}, {0.6, 0.2}};
  // i = 0b101, j = 0b011 at power 3: product over digit pairs
  double want = seed[1][0] * seed[0][1] * seed[1][1];
  CHECK(kronecker_edge_probability(seed, 3, 5, 3) == doctest::Approx(want));
  // power 1 is the seed itself
  CHECK(kronecker_edge_probability(seed, 1, 1, 0) == doctest::Approx(0.6));
}

TEST_CASE("kronecker empirical edge frequency matches the probability") {
  GeneratorSpec s;
  s.family = Family::kronecker;
  s.kron_seed = {{0.95, 0.55}, {0.55, 0.3}};
  s.kron_power = 4;
  s.node_count = 16;
  int hits = 0, reps = 600;
  const std::size_t i = 3, j = 12;
  double p = kronecker_edge_probability(s.kron_seed, 4, i, j);
  for (int rep = 0; rep < reps; ++rep) {
    s.seed = 1000 + rep;
    auto net = generate(s);
    for (const Edge& e : net.edges())
      if (e.src == i && e.dst == j) {
        ++hits;
        break;
      }
  }
  double freq = static_cast<double>(hits) / reps;
  double sd = std::sqrt(p * (1 - p) / reps);
  CHECK(std::fabs(freq - p) < 4 * sd + 1e-12);
}

TEST_CASE("rate sampling is deterministic, open-interval, topology-safe") {
  auto net = generate(er_spec(60, 5, 3));
  auto a = sample_rates(net, 11, 0.25, 1.75);
  auto b = sample_rates(net, 11, 0.25, 1.75);
  auto c = sample_rates(net, 12, 0.25, 1.75);
  CHECK(same_edges(a, b));
  CHECK_FALSE(same_edges(a, c));
  CHECK(a.edge_count() == net.edge_count());
  for (const Edge& e : a.edges()) {
    CHECK(e.rate > 0.25);
    CHECK(e.rate < 1.75);
  }
}
