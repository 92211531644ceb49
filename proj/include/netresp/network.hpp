#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netresp {

// Value of one lower-triangle cell. Held-out cells are stored in-band and are
// never conflated with an absent edge.
enum class EdgeState : std::int8_t { Absent = 0, Present = 1, Missing = -1 };

inline std::size_t edge_count(int V) { return static_cast<std::size_t>(V) * (V - 1) / 2; }

// Position of pair (v, u), 1 <= u < v <= V, in the column-wise lower triangle
// (2,1), (3,1), ..., (V,1), (3,2), ..., (V,V-1). Both the pair and the
// returned index are 1-based.
std::size_t pair_to_index(int v, int u, int V);

// Inverse of pair_to_index: returns (v, u) with v > u, 1-based.
std::pair<int, int> index_to_pair(std::size_t l, int V);

// Precomputed 0-based lookup tables for one node count. Everything that walks
// edges goes through this (built on pair_to_index) rather than redoing offsets.
class EdgeIndexer {
 public:
  explicit EdgeIndexer(int V);

  int nodes() const noexcept { return V_; }
  std::size_t edges() const noexcept { return pairs_.size(); }

  // 0-based edge index of the unordered pair {a, b}, a != b, 0-based nodes.
  std::size_t index(int a, int b) const { return lookup_[static_cast<std::size_t>(a) * V_ + b]; }

  // 0-based (v, u), v > u.
  const std::pair<int, int>& pair(std::size_t l) const { return pairs_[l]; }

  // For node v: the V-1 other nodes in increasing order and the matching
  // edge indices. This fixes the stacking order used by row-block updates.
  const std::vector<int>& neighbours(int v) const { return neighbours_[v]; }
  const std::vector<std::size_t>& incident_edges(int v) const { return incident_[v]; }

 private:
  int V_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::size_t> lookup_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<std::vector<std::size_t>> incident_;
};

// Symmetric binary matrix with zero diagonal. The constructor validates.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  // Empty graph on V nodes.
  explicit AdjacencyMatrix(int V);
  // Row-major V*V entries in {0,1}; throws ValidationError on asymmetry,
  // nonzero diagonal or non-binary values.
  AdjacencyMatrix(int V, std::vector<std::uint8_t> entries);

  int nodes() const noexcept { return V_; }
  bool operator()(int a, int b) const { return entries_[static_cast<std::size_t>(a) * V_ + b] != 0; }
  void set_edge(int a, int b, bool present);
  int degree(int a) const;
  std::size_t edge_total() const;

  const std::vector<std::uint8_t>& entries() const noexcept { return entries_; }
  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  int V_ = 0;
  std::vector<std::uint8_t> entries_;
};

struct EdgeVector {
  int V = 0;
  std::vector<EdgeState> values;

  bool has_missing() const;
  bool operator==(const EdgeVector&) const = default;
};

EdgeVector vectorize(const AdjacencyMatrix& A);
// Throws ValidationError if the vector has missing cells or the wrong length.
AdjacencyMatrix devectorize(const EdgeVector& e);

// Categorical node labels (hemisphere, lobe, ...), one per node.
struct BlockPartition {
  std::vector<int> labels;

  int nodes() const { return static_cast<int>(labels.size()); }
  int block_count() const;
};

// n networks on a common node set, each with a scalar trait.
class NetworkDataset {
 public:
  NetworkDataset() = default;
  NetworkDataset(std::vector<std::string> ids, std::vector<double> traits, std::vector<EdgeVector> networks);

  int nodes() const noexcept { return V_; }
  int subjects() const noexcept { return static_cast<int>(networks_.size()); }
  std::size_t edges() const noexcept { return edge_count(V_); }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& traits() const noexcept { return traits_; }
  const std::vector<EdgeVector>& networks() const noexcept { return networks_; }
  const EdgeVector& network(int i) const { return networks_[i]; }
  EdgeState edge(int i, std::size_t l) const { return networks_[i].values[l]; }

  // Sorted distinct trait values, and the position of each subject's trait.
  const std::vector<double>& unique_traits() const noexcept { return unique_traits_; }
  const std::vector<int>& trait_index() const noexcept { return trait_index_; }
  // Number of subjects at each unique trait.
  std::vector<int> replicate_counts() const;

  std::size_t missing_count() const;

  bool operator==(const NetworkDataset& o) const {
    return ids_ == o.ids_ && traits_ == o.traits_ && networks_ == o.networks_;
  }

 private:
  int V_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> traits_;
  std::vector<EdgeVector> networks_;
  std::vector<double> unique_traits_;
  std::vector<int> trait_index_;
};

}  // namespace netresp
