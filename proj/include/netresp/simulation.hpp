#pragma once

#include <string>
#include <vector>

#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp {

struct ScenarioConfig {
  int V = 20;
  int trait_min = 1;
  int trait_max = 15;
  int per_trait = 4;
  // Node blocks as 1-based inclusive ranges: L1, L2, R1, R2.
  std::vector<int> lobe_of_node;  // empty: the default four blocks of five nodes

  double assortative_within = 0.6;
  double assortative_between = 0.15;
  int ring_degree = 4;
  double rewire_p = 0.15;
  double high_inter = 0.45;  // across hemispheres, traits 11..15
  double high_intra = 0.2;   // within a hemisphere, traits 11..15
  std::uint64_t seed = 1;

  void validate() const;
  // Lobe labels 0..3 (L1, L2, R1, R2) per node.
  BlockPartition lobes() const;
  // Hemisphere labels 0 (left) / 1 (right) per node.
  BlockPartition hemispheres() const;
};

struct LabeledDataset {
  NetworkDataset data;
  std::vector<std::string> regimes;  // per subject
  BlockPartition lobes;
  BlockPartition hemispheres;
};

// Independent edges: within_p when both ends share a label of `groups`,
// between_p otherwise.
AdjacencyMatrix generate_block_network(double within_p, double between_p, const BlockPartition& groups,
                                       RngStream& rng);

// Ring lattice with each node tied to its ring_degree nearest neighbours,
// then each lattice edge (v, v+j), j = 1..ring_degree/2, has its far end
// moved with probability rewire_p to a uniformly chosen node that is neither
// v nor already adjacent to v. The edge count never changes.
AdjacencyMatrix generate_watts_strogatz(int V, int ring_degree, double rewire_p, RngStream& rng);

// Traits trait_min..trait_max with per_trait subjects each. Low third:
// subjects alternate in pairs between hemisphere- and lobe-assortative block
// models; middle third: Watts-Strogatz; top third: inter-hemisphere edges
// more likely than intra-hemisphere ones.
LabeledDataset generate_scenario(const ScenarioConfig& sc);

}  // namespace netresp
