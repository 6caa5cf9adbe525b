#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "influx/fpe.hpp"
#include "influx/graph.hpp"
#include "influx/oracle.hpp"
#include "influx/rng.hpp"

using namespace influx;

namespace {

PropagationNetwork random_network(std::uint64_t seed, NodeId k,
                                  double edge_prob, bool with_self = false,
                                  bool with_recovery = false) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < k; ++i)
    for (NodeId j = 0; j < k; ++j)
      if (i != j && rng.bernoulli(edge_prob))
        edges.push_back({i, j, rng.uniform_open(0.2, 1.5)});
  std::vector<double> beta(k, 0.0), gamma(k, 0.0);
  if (with_self)
    for (NodeId i = 0; i < k; ++i) beta[i] = rng.uniform_open(0.05, 0.3);
  if (with_recovery)
    for (NodeId i = 0; i < k; ++i) gamma[i] = rng.uniform_open(0.1, 0.4);
  return PropagationNetwork(k, std::move(edges), std::move(beta),
                            std::move(gamma));
}

}  // namespace

TEST_CASE("oracle refuses oversized state spaces") {
  auto net = random_network(1, 10, 0.3);
  OracleOptions opts;
  opts.state_limit = 8;
  CHECK_THROWS_AS(exact_solve(net, NodeSet{0}, {0.0, 1.0}, opts),
                  std::invalid_argument);
}

TEST_CASE("two-node chain matches the exponential closed form") {
  double a = 0.7;
  PropagationNetwork net(2, {{0, 1, a}});
  auto grid = uniform_grid(4.0, 21);
  auto sol = exact_solve(net, NodeSet{0}, grid);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    double e = std::exp(-a * grid[m]);
    CHECK(sol.density.rho[m][1] == doctest::Approx(e).epsilon(1e-9));
    CHECK(sol.density.rho[m][2] == doctest::Approx(1 - e).epsilon(1e-9));
    CHECK(sol.density.rho[m][0] == doctest::Approx(0.0));
    // the exact forward rate of the count chain is the edge rate itself
    if (!std::isnan(sol.q_rates.q[m][1]))
      CHECK(sol.q_rates.q[m][1] == doctest::Approx(a).epsilon(1e-7));
  }
}

TEST_CASE("two-leaf star has the known time-varying forward rate") {
  double a = 1.1, b = 0.4;
  PropagationNetwork net(3, {{0, 1, a}, {0, 2, b}});
  auto grid = uniform_grid(3.0, 16);
  auto sol = exact_solve(net, NodeSet{0}, grid);
  for (std::size_t m = 1; m < grid.size(); ++m) {
    double t = grid[m];
    double ea = std::exp(-a * t), eb = std::exp(-b * t);
    double p01 = (1 - ea) * eb;  // {0,1} active
    double p02 = (1 - eb) * ea;  // {0,2} active
    CHECK(sol.density.rho[m][2] == doctest::Approx(p01 + p02).epsilon(1e-9));
    // q_1 is constant a+b; q_2 mixes the two conditional frontiers
    CHECK(sol.q_rates.q[m][1] == doctest::Approx(a + b).epsilon(1e-7));
    double want_q2 = (b * p01 + a * p02) / (p01 + p02);
    if (!std::isnan(sol.q_rates.q[m][2]))
      CHECK(sol.q_rates.q[m][2] == doctest::Approx(want_q2).epsilon(1e-6));
  }
}

TEST_CASE("single node with self-activation and recovery reaches the known equilibrium") {
  double beta = 0.8, gamma = 0.3;
  PropagationNetwork net(1, {}, {beta}, {gamma});
  auto grid = uniform_grid(6.0, 13);
  auto sol = exact_solve(net, NodeSet{}, grid);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    double t = grid[m];
    double p = beta / (beta + gamma) * (1 - std::exp(-(beta + gamma) * t));
    CHECK(sol.density.rho[m][1] == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("lumped density rows are probability vectors") {
  auto net = random_network(5, 8, 0.3, true, true);
  auto sol = exact_solve(net, NodeSet{0, 3}, uniform_grid(4.0, 20));
  for (const auto& row : sol.density.rho) {
    double sum = 0;
    for (double v : row) {
      CHECK(v >= -1e-12);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  // initial condition: point mass at the source count
  CHECK(sol.density.rho[0][2] == doctest::Approx(1.0));
}

TEST_CASE("raw configuration trajectories are kept on request and consistent") {
  auto net = random_network(6, 6, 0.35);
  OracleOptions opts;
  opts.keep_raw = true;
  auto grid = uniform_grid(2.0, 9);
  auto sol = exact_solve(net, NodeSet{1}, grid, opts);
  REQUIRE(sol.raw.size() == grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    REQUIRE(sol.raw[m].size() == 64);
    // lumping by population count reproduces the stored density
    std::vector<double> lumped(7, 0.0);
    for (std::size_t mask = 0; mask < 64; ++mask)
      lumped[static_cast<std::size_t>(__builtin_popcountll(mask))] +=
          sol.raw[m][mask];
    for (std::size_t k = 0; k <= 6; ++k)
      CHECK(lumped[k] == doctest::Approx(sol.density.rho[m][k]).epsilon(1e-10));
  }
}

TEST_CASE("solving the count chain with the exact rates reproduces the lumped density") {
  // The lumping theorem made operational: feed the oracle's own rates back
  // into the ODE solver and demand agreement.
  auto net = random_network(7, 6, 0.4, false, true);
  auto grid = uniform_grid(3.0, 121);
  auto sol = exact_solve(net, NodeSet{0}, grid);
  RateProfile profile = sol.rate_profile();
  profile.fill_undefined();
  auto rho0 = initial_distribution(7, 1);
  SolveOptions opts;
  opts.step = grid[1] - grid[0];
  auto table = solve_rk4(profile, rho0, grid, opts);
  for (std::size_t m = 0; m < grid.size(); ++m)
    for (std::size_t k = 0; k <= 6; ++k)
      CHECK(table.rho[m][k] ==
            doctest::Approx(sol.density.rho[m][k]).epsilon(1e-4).scale(1.0));
}

TEST_CASE("bound verification passes when fed the exact rates") {
  auto net = random_network(9, 6, 0.4);
  auto grid = uniform_grid(3.0, 41);
  auto sol = exact_solve(net, NodeSet{0}, grid);
  RateProfile profile = sol.rate_profile();
  profile.fill_undefined();
  auto report = verify_bounds(net, NodeSet{0}, profile, 0.3, grid);
  CHECK(report.all_pass());
  for (char ok : report.hypothesis_ok) CHECK(ok == 1);
  // measured rate errors at defined cells are (numerically) zero
  for (const auto& row : report.delta)
    for (double d : row)
      if (!std::isnan(d)) CHECK(d < 1e-5);
}

TEST_CASE("bound verification flags a grossly wrong estimate") {
  auto net = random_network(10, 5, 0.5);
  auto grid = uniform_grid(3.0, 21);
  std::vector<double> q(6, 0.0);
  for (std::size_t k = 1; k < 5; ++k) q[k] = 50.0;  // nonsense rates
  auto report = verify_bounds(net, NodeSet{0}, RateProfile::constant(q), 0.3,
                              grid);
  bool any_hypothesis_failure = false;
  for (char ok : report.hypothesis_ok)
    if (!ok) any_hypothesis_failure = true;
  CHECK(any_hypothesis_failure);
}

TEST_CASE("bound verification rejects epsilon outside (0,1)") {
  PropagationNetwork net(2, {{0, 1, 1.0}});
  auto p = RateProfile::constant({0.0, 1.0, 0.0});
  CHECK_THROWS(verify_bounds(net, NodeSet{0}, p, 0.0, {0.0, 1.0}));
  CHECK_THROWS(verify_bounds(net, NodeSet{0}, p, 1.0, {0.0, 1.0}));
}
