#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "influx/fpe.hpp"
#include "influx/graph.hpp"
#include "influx/rng.hpp"
#include "influx/sim.hpp"

using namespace influx;

namespace {

bool same_cascade(const Cascade& a, const Cascade& b) {
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (a.events[i].time != b.events[i].time ||
        a.events[i].node != b.events[i].node ||
        a.events[i].kind != b.events[i].kind)
      return false;
  return true;
}

}  // namespace

TEST_CASE("cascades start with the sources at time zero") {
  PropagationNetwork net(4, {{0, 1, 1.0}, {1, 2, 1.0}});
  Rng rng(1);
  auto c = simulate_cascade(net, NodeSet{0, 3}, 5.0, rng);
  REQUIRE(c.events.size() >= 2);
  CHECK(c.events[0].time == 0.0);
  CHECK(c.events[1].time == 0.0);
  CHECK(c.events[0].kind == EventKind::activate);
  CHECK((c.events[0].node == 0 || c.events[0].node == 3));
  CHECK(c.sources == NodeSet{0, 3});
}

TEST_CASE("event times are nondecreasing and within the horizon") {
  PropagationNetwork net(6, {{0, 1, 2.0}, {1, 2, 1.0}, {2, 3, 1.0},
                             {3, 4, 0.5}, {4, 5, 0.5}},
                         {}, std::vector<double>(6, 0.3));
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = simulate_cascade(net, NodeSet{0}, 3.0, rng);
    double last = 0;
    for (const auto& ev : c.events) {
      CHECK(ev.time >= last);
      CHECK(ev.time <= 3.0);
      last = ev.time;
    }
  }
}

TEST_CASE("nodes activate at most once while active") {
  PropagationNetwork net(5, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 1.0},
                             {2, 3, 1.0}, {3, 4, 1.0}},
                         {}, std::vector<double>(5, 0.5));
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = simulate_cascade(net, NodeSet{0}, 4.0, rng);
    std::vector<int> state(5, 0);
    for (const auto& ev : c.events) {
      if (ev.kind == EventKind::activate) {
        CHECK(state[ev.node] == 0);  // must be inactive to activate
        state[ev.node] = 1;
      } else {
        CHECK(state[ev.node] == 1);  // must be active to recover
        state[ev.node] = 0;
      }
    }
  }
}

TEST_CASE("first activation time on a single edge is exponential") {
  // 0 -> 1 at rate 1.3: the waiting time has mean 1/1.3.
  double rate = 1.3;
  PropagationNetwork net(2, {{0, 1, rate}});
  Rng rng(11);
  double sum = 0, sumsq = 0;
  int hits = 0, n = 20000;
  for (int i = 0; i < n; ++i) {
    auto c = simulate_cascade(net, NodeSet{0}, 50.0, rng);
    if (c.events.size() == 2) {
      double t = c.events[1].time;
      sum += t;
      sumsq += t * t;
      ++hits;
    }
  }
  REQUIRE(hits > n * 99 / 100);
  double mean = sum / hits;
  double sd = std::sqrt(sumsq / hits - mean * mean);
  // 4-sigma band around the exponential mean
  CHECK(std::fabs(mean - 1 / rate) < 4 * sd / std::sqrt(hits));
}

TEST_CASE("race between two edges picks winners by rate ratio") {
  // 0 -> 1 at 3.0 and 0 -> 2 at 1.0: node 1 wins with probability 3/4.
  PropagationNetwork net(3, {{0, 1, 3.0}, {0, 2, 1.0}});
  Rng rng(13);
  int first_is_1 = 0, n = 20000;
  for (int i = 0; i < n; ++i) {
    auto c = simulate_cascade(net, NodeSet{0}, 100.0, rng);
    REQUIRE(c.events.size() >= 2);
    if (c.events[1].node == 1) ++first_is_1;
  }
  double freq = static_cast<double>(first_is_1) / n;
  double sd = std::sqrt(0.75 * 0.25 / n);
  CHECK(std::fabs(freq - 0.75) < 4 * sd);
}

TEST_CASE("self-activation fires without any active neighbor") {
  PropagationNetwork net(2, {}, {0.0, 2.0});
  Rng rng(17);
  auto c = simulate_cascade(net, NodeSet{}, 100.0, rng);
  REQUIRE(c.events.size() == 1);
  CHECK(c.events[0].node == 1);
}

TEST_CASE("recovery empties the network eventually") {
  PropagationNetwork net(3, {{0, 1, 5.0}, {1, 2, 5.0}}, {},
                         {1.0, 1.0, 1.0});
  Rng rng(19);
  auto c = simulate_cascade(net, NodeSet{0}, 1e6, rng);
  // with no self-activation, recoveries eventually win and the walk dies
  CHECK(c.events.back().time < 1e6);
  std::size_t active = 0;
  for (const auto& ev : c.events)
    active += ev.kind == EventKind::activate ? 1 : -1;
  CHECK(active == 0);
}

TEST_CASE("active count queries bracket event times correctly") {
  Cascade c;
  c.horizon = 10;
  c.sources = NodeSet{0};
  c.events = {{0.0, 0, EventKind::activate},
              {1.0, 1, EventKind::activate},
              {2.0, 0, EventKind::recover},
              {4.0, 2, EventKind::activate}};
  CHECK(active_count_at(c, 0.0) == 1);
  CHECK(active_count_at(c, 0.5) == 1);
  CHECK(active_count_at(c, 1.0) == 2);
  CHECK(active_count_at(c, 1.5) == 2);
  CHECK(active_count_at(c, 3.0) == 1);
  CHECK(active_count_at(c, 9.0) == 2);
}

TEST_CASE("empirical density matches hand-counted cascades") {
  std::vector<Cascade> cascades(2);
  cascades[0].sources = NodeSet{0};
  cascades[0].horizon = 2.0;
  cascades[0].events = {{0.0, 0, EventKind::activate},
                        {0.5, 1, EventKind::activate}};
  cascades[1].sources = NodeSet{0};
  cascades[1].horizon = 2.0;
  cascades[1].events = {{0.0, 0, EventKind::activate},
                        {1.5, 1, EventKind::activate},
                        {1.8, 2, EventKind::activate}};
  auto d = empirical_density(cascades, 3, {0.0, 1.0, 2.0});
  // t=0: both have 1 active; t=1: counts 2 and 1; t=2: counts 2 and 3
  CHECK(d.rho[0] == std::vector<double>{0, 1, 0, 0});
  CHECK(d.rho[1] == std::vector<double>{0, 0.5, 0.5, 0});
  CHECK(d.rho[2] == std::vector<double>{0, 0, 0.5, 0.5});

  auto sigma = empirical_influence(cascades, 3, {0.0, 1.0, 2.0});
  CHECK(sigma.value[0] == doctest::Approx(1.0));
  CHECK(sigma.value[1] == doctest::Approx(1.5));
  CHECK(sigma.value[2] == doctest::Approx(2.5));
}

TEST_CASE("ensembles are reproducible and worker-count independent") {
  PropagationNetwork net(8, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 3, 2.0},
                             {3, 4, 1.0}, {4, 5, 1.0}, {5, 6, 0.5},
                             {6, 7, 0.5}});
  auto a = run_ensemble(net, NodeSet{0}, 5.0, 64, 123, 1);
  auto b = run_ensemble(net, NodeSet{0}, 5.0, 64, 123, 4);
  auto c = run_ensemble(net, NodeSet{0}, 5.0, 64, 124, 1);
  REQUIRE(a.size() == b.size());
  bool all_same = true, any_diff_seed = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    all_same = all_same && same_cascade(a[i], b[i]);
    any_diff_seed = any_diff_seed || !same_cascade(a[i], c[i]);
  }
  CHECK(all_same);
  CHECK(any_diff_seed);
}

TEST_CASE("empirical rate extraction recovers a constant birth rate") {
  // Pure-birth chain on counts with q = 2 everywhere below the top: simulate
  // a star-free chain 0->1->...->K-1 where each frontier has rate 2.
  std::vector<Edge> edges;
  NodeId k = 6;
  for (NodeId i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1, 2.0});
  PropagationNetwork net(k, std::move(edges));
  auto cascades = run_ensemble(net, NodeSet{0}, 2.0, 40000, 31, 0);
  auto grid = uniform_grid(2.0, 81);
  auto density = empirical_density(cascades, k, grid);
  auto rates = empirical_rates(density, 0.01);
  // averaged over defined cells, the estimate should sit near 2
  double sum = 0;
  int cells = 0;
  for (std::size_t m = 0; m < rates.t.size(); ++m)
    for (std::size_t j = 1; j + 1 < rates.q[m].size(); ++j)
      if (!std::isnan(rates.q[m][j])) {
        sum += rates.q[m][j];
        ++cells;
      }
  REQUIRE(cells > 20);
  CHECK(sum / cells == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("large-ensemble mean matches the exact two-node law") {
  double rate = 0.9;
  PropagationNetwork net(2, {{0, 1, rate}});
  auto cascades = run_ensemble(net, NodeSet{0}, 3.0, 30000, 71, 0);
  auto sigma = empirical_influence(cascades, 2, uniform_grid(3.0, 7));
  for (std::size_t m = 0; m < sigma.t.size(); ++m) {
    double want = 1 + (1 - std::exp(-rate * sigma.t[m]));
    CHECK(sigma.value[m] == doctest::Approx(want).epsilon(0.02));
  }
}
