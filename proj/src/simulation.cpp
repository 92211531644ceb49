#include "netresp/simulation.hpp"

#include <algorithm>
#include <cstdio>

#include "netresp/errors.hpp"

namespace netresp {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void ScenarioConfig::validate() const {
  if (V < 4) throw InvalidArgument("scenario: need at least four nodes");
  if (trait_max - trait_min + 1 < 3) throw InvalidArgument("scenario: trait grid needs at least three values");
  if (per_trait < 1) throw InvalidArgument("scenario: per_trait must be positive");
  for (double p : {assortative_within, assortative_between, rewire_p, high_inter, high_intra}) {
    if (!is_probability(p)) throw InvalidArgument("scenario: probabilities must lie in [0, 1]");
  }
  if (ring_degree < 2 || ring_degree % 2 != 0 || ring_degree >= V) {
    throw InvalidArgument("scenario: ring degree must be even, positive and below V");
  }
  if (!lobe_of_node.empty()) {
    if (static_cast<int>(lobe_of_node.size()) != V) throw InvalidArgument("scenario: lobe_of_node needs V labels");
    for (int b : lobe_of_node) {
      if (b < 0 || b > 3) throw InvalidArgument("scenario: lobe labels must be 0..3");
    }
  }
}

BlockPartition ScenarioConfig::lobes() const {
  if (!lobe_of_node.empty()) return {lobe_of_node};
  BlockPartition p;
  p.labels.resize(V);
  for (int v = 0; v < V; ++v) p.labels[v] = std::min(3, v * 4 / V);
  return p;
}

BlockPartition ScenarioConfig::hemispheres() const {
  BlockPartition p = lobes();
  for (int& b : p.labels) b = b / 2;
  return p;
}

AdjacencyMatrix generate_block_network(double within_p, double between_p, const BlockPartition& groups,
                                       RngStream& rng) {
  if (!is_probability(within_p) || !is_probability(between_p)) {
    throw InvalidArgument("generate_block_network: probabilities must lie in [0, 1]");
  }
  const int V = groups.nodes();
  AdjacencyMatrix A(V);
  for (int u = 0; u < V; ++u) {
    for (int v = u + 1; v < V; ++v) {
      const double p = groups.labels[v] == groups.labels[u] ? within_p : between_p;
      if (rng.bernoulli(p)) A.set_edge(v, u, true);
    }
  }
  return A;
}

AdjacencyMatrix generate_watts_strogatz(int V, int ring_degree, double rewire_p, RngStream& rng) {
  if (ring_degree < 2 || ring_degree % 2 != 0 || ring_degree >= V) {
    throw InvalidArgument("generate_watts_strogatz: ring degree must be even, positive and below V");
  }
  if (!is_probability(rewire_p)) throw InvalidArgument("generate_watts_strogatz: rewire_p must lie in [0, 1]");
  AdjacencyMatrix A(V);
  const int half = ring_degree / 2;
  for (int v = 0; v < V; ++v) {
    for (int j = 1; j <= half; ++j) A.set_edge(v, (v + j) % V, true);
  }
  for (int j = 1; j <= half; ++j) {
    for (int v = 0; v < V; ++v) {
      const int u = (v + j) % V;
      if (!A(v, u) || !rng.bernoulli(rewire_p)) continue;
      if (A.degree(v) >= V - 1) continue;
      int w;
      do {
        w = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(V - 1)));
      } while (w == v || A(v, w));
      A.set_edge(v, u, false);
      A.set_edge(v, w, true);
    }
  }
  return A;
}

LabeledDataset generate_scenario(const ScenarioConfig& sc) {
  sc.validate();
  const BlockPartition lobes = sc.lobes();
  const BlockPartition hemis = sc.hemispheres();
  const int traits = sc.trait_max - sc.trait_min + 1;
  // Regime boundaries split the grid into thirds (1..5, 6..10, 11..15 by default).
  const int low_end = sc.trait_min + traits / 3 - 1;
  const int mid_end = sc.trait_min + 2 * traits / 3 - 1;

  std::vector<std::string> ids, regimes;
  std::vector<double> xs;
  std::vector<EdgeVector> nets;
  int subject = 0;
  for (int x = sc.trait_min; x <= sc.trait_max; ++x) {
    for (int r = 0; r < sc.per_trait; ++r, ++subject) {
      RngStream rng(sc.seed, {0x5111ULL, static_cast<std::uint64_t>(subject)});
      AdjacencyMatrix A;
      std::string regime;
      if (x <= low_end) {
        if ((r / 2) % 2 == 0) {
          A = generate_block_network(sc.assortative_within, sc.assortative_between, hemis, rng);
          regime = "hemisphere-assortative";
        } else {
          A = generate_block_network(sc.assortative_within, sc.assortative_between, lobes, rng);
          regime = "lobe-assortative";
        }
      } else if (x <= mid_end) {
        A = generate_watts_strogatz(sc.V, sc.ring_degree, sc.rewire_p, rng);
        regime = "small-world";
      } else {
        A = generate_block_network(sc.high_intra, sc.high_inter, hemis, rng);
        regime = "interhemispheric";
      }
      char id[16];
      std::snprintf(id, sizeof id, "s%02d", subject + 1);
      ids.emplace_back(id);
      xs.push_back(x);
      nets.push_back(vectorize(A));
      regimes.push_back(regime);
    }
  }
  return {NetworkDataset(std::move(ids), std::move(xs), std::move(nets)), std::move(regimes), lobes, hemis};
}

}  // namespace netresp
