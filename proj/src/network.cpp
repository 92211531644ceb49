#include "netresp/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netresp/errors.hpp"

namespace netresp {

std::size_t pair_to_index(int v, int u, int V) {
  if (V < 2 || u < 1 || v > V || u >= v) {
    throw InvalidArgument("pair_to_index: need 1 <= u < v <= V, got (" + std::to_string(v) + "," +
                          std::to_string(u) + ") with V=" + std::to_string(V));
  }
  // Columns 1..u-1 hold (V-1) + (V-2) + ... + (V-u+1) entries.
  const auto col = static_cast<std::size_t>(u - 1);
  const std::size_t offset = col * static_cast<std::size_t>(V) - col * (col + 1) / 2;
  return offset + static_cast<std::size_t>(v - u);
}

std::pair<int, int> index_to_pair(std::size_t l, int V) {
  if (V < 2 || l < 1 || l > edge_count(V)) {
    throw InvalidArgument("index_to_pair: index " + std::to_string(l) + " out of range for V=" + std::to_string(V));
  }
  std::size_t remaining = l;
  for (int u = 1; u < V; ++u) {
    const auto column = static_cast<std::size_t>(V - u);
    if (remaining <= column) return {u + static_cast<int>(remaining), u};
    remaining -= column;
  }
  throw InvalidArgument("index_to_pair: unreachable");
}

EdgeIndexer::EdgeIndexer(int V) : V_(V) {
  if (V < 2) throw InvalidArgument("EdgeIndexer: need at least two nodes");
  const std::size_t L = edge_count(V);
  pairs_.resize(L);
  lookup_.assign(static_cast<std::size_t>(V) * V, std::numeric_limits<std::size_t>::max());
  for (int u = 1; u < V; ++u) {
    for (int v = u + 1; v <= V; ++v) {
      const std::size_t l = pair_to_index(v, u, V) - 1;
      pairs_[l] = {v - 1, u - 1};
      lookup_[static_cast<std::size_t>(v - 1) * V + (u - 1)] = l;
      lookup_[static_cast<std::size_t>(u - 1) * V + (v - 1)] = l;
    }
  }
  neighbours_.resize(V);
  incident_.resize(V);
  for (int v = 0; v < V; ++v) {
    for (int u = 0; u < V; ++u) {
      if (u == v) continue;
      neighbours_[v].push_back(u);
      incident_[v].push_back(index(v, u));
    }
  }
}

AdjacencyMatrix::AdjacencyMatrix(int V) : V_(V), entries_(static_cast<std::size_t>(V) * V, 0) {
  if (V < 1) throw InvalidArgument("AdjacencyMatrix: node count must be positive");
}

AdjacencyMatrix::AdjacencyMatrix(int V, std::vector<std::uint8_t> entries) : V_(V), entries_(std::move(entries)) {
  if (V < 1) throw InvalidArgument("AdjacencyMatrix: node count must be positive");
  if (entries_.size() != static_cast<std::size_t>(V) * V) {
    throw ValidationError("adjacency matrix needs " + std::to_string(V * V) + " entries");
  }
  for (int a = 0; a < V; ++a) {
    if (entries_[static_cast<std::size_t>(a) * V + a] != 0) {
      throw ValidationError("nonzero diagonal at node " + std::to_string(a + 1));
    }
    for (int b = 0; b < V; ++b) {
      const auto x = entries_[static_cast<std::size_t>(a) * V + b];
      if (x > 1) throw ValidationError("adjacency entries must be 0 or 1");
      if (x != entries_[static_cast<std::size_t>(b) * V + a]) {
        throw ValidationError("asymmetric adjacency: A[" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                              "] != A[" + std::to_string(b + 1) + "," + std::to_string(a + 1) + "]");
      }
    }
  }
}

void AdjacencyMatrix::set_edge(int a, int b, bool present) {
  if (a == b) throw InvalidArgument("set_edge: self loops are not allowed");
  entries_[static_cast<std::size_t>(a) * V_ + b] = present;
  entries_[static_cast<std::size_t>(b) * V_ + a] = present;
}

int AdjacencyMatrix::degree(int a) const {
  int d = 0;
  for (int b = 0; b < V_; ++b) d += entries_[static_cast<std::size_t>(a) * V_ + b];
  return d;
}

std::size_t AdjacencyMatrix::edge_total() const {
  std::size_t total = 0;
  for (auto x : entries_) total += x;
  return total / 2;
}

bool EdgeVector::has_missing() const {
  return std::find(values.begin(), values.end(), EdgeState::Missing) != values.end();
}

EdgeVector vectorize(const AdjacencyMatrix& A) {
  const int V = A.nodes();
  EdgeVector e{V, std::vector<EdgeState>(edge_count(V))};
  if (V < 2) return e;
  const EdgeIndexer idx(V);
  for (std::size_t l = 0; l < idx.edges(); ++l) {
    const auto [v, u] = idx.pair(l);
    e.values[l] = A(v, u) ? EdgeState::Present : EdgeState::Absent;
  }
  return e;
}

AdjacencyMatrix devectorize(const EdgeVector& e) {
  if (e.values.size() != edge_count(e.V)) throw ValidationError("edge vector length does not match V");
  AdjacencyMatrix A(e.V);
  if (e.V < 2) return A;
  const EdgeIndexer idx(e.V);
  for (std::size_t l = 0; l < idx.edges(); ++l) {
    if (e.values[l] == EdgeState::Missing) throw ValidationError("cannot devectorize an edge vector with missing cells");
    const auto [v, u] = idx.pair(l);
    A.set_edge(v, u, e.values[l] == EdgeState::Present);
  }
  return A;
}

int BlockPartition::block_count() const {
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

NetworkDataset::NetworkDataset(std::vector<std::string> ids, std::vector<double> traits,
                               std::vector<EdgeVector> networks)
    : ids_(std::move(ids)), traits_(std::move(traits)), networks_(std::move(networks)) {
  if (networks_.empty()) throw ValidationError("dataset has no subjects");
  if (traits_.size() != networks_.size() || ids_.size() != networks_.size()) {
    throw ValidationError("dataset: subject ids, traits and networks differ in count");
  }
  V_ = networks_.front().V;
  if (V_ < 2) throw ValidationError("dataset: need at least two nodes");
  for (const auto& e : networks_) {
    if (e.V != V_) throw ValidationError("dataset: networks have different node counts");
    if (e.values.size() != edge_count(V_)) throw ValidationError("dataset: edge vector length does not match V");
  }
  for (double x : traits_) {
    if (!std::isfinite(x)) throw ValidationError("dataset: traits must be finite");
  }
  unique_traits_ = traits_;
  std::sort(unique_traits_.begin(), unique_traits_.end());
  unique_traits_.erase(std::unique(unique_traits_.begin(), unique_traits_.end()), unique_traits_.end());
  trait_index_.reserve(traits_.size());
  for (double x : traits_) {
    trait_index_.push_back(static_cast<int>(
        std::lower_bound(unique_traits_.begin(), unique_traits_.end(), x) - unique_traits_.begin()));
  }
}

std::vector<int> NetworkDataset::replicate_counts() const {
  std::vector<int> counts(unique_traits_.size(), 0);
  for (int j : trait_index_) ++counts[j];
  return counts;
}

std::size_t NetworkDataset::missing_count() const {
  std::size_t total = 0;
  for (const auto& e : networks_) total += std::count(e.values.begin(), e.values.end(), EdgeState::Missing);
  return total;
}

}  // namespace netresp
