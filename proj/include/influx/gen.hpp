#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "influx/graph.hpp"

namespace influx {

enum class Family { erdos_renyi, small_world, scale_free, kronecker };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct GeneratorSpec {
  Family family = Family::erdos_renyi;
  NodeId node_count = 0;

  // erdos_renyi
  double avg_degree = 0;
  // small_world: even ring degree, shortcut-addition probability
  std::size_t ring_degree = 0;
  double rewire_prob = 0;
  // scale_free: out-edges per arriving node
  std::size_t attach_count = 0;
  // kronecker: square seed probability matrix, power; node_count = dim^power
  std::vector<std::vector<double>> kron_seed;
  std::size_t kron_power = 0;

  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// Topology only: all edge rates set to 1. Deterministic per seed.
PropagationNetwork generate(const GeneratorSpec& spec);

/// Independent uniform (lo,hi) rate per edge (exact-lo draws resampled),
/// deterministic per seed. Topology is unchanged.
PropagationNetwork sample_rates(const PropagationNetwork& net,
                                std::uint64_t seed, double lo, double hi);

/// Entry (i,j) of the power-th Kronecker power of the seed matrix: the
/// independent edge probability used by the generator. Test oracle surface.
double kronecker_edge_probability(const std::vector<std::vector<double>>& seed,
                                  std::size_t power, std::size_t i,
                                  std::size_t j);

}  // namespace influx
