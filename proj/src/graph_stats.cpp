#include "netresp/graph_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "netresp/errors.hpp"

namespace netresp {

double density(const AdjacencyMatrix& A) {
  const int V = A.nodes();
  if (V < 2) return 0.0;
  return static_cast<double>(A.edge_total()) / static_cast<double>(edge_count(V));
}

double transitivity(const AdjacencyMatrix& A) {
  const int V = A.nodes();
  double closed = 0.0;   // 3 * triangles
  double triples = 0.0;  // paths of length two, counted by centre
  std::vector<int> nbrs;
  for (int v = 0; v < V; ++v) {
    nbrs.clear();
    for (int u = 0; u < V; ++u) {
      if (A(v, u)) nbrs.push_back(u);
    }
    const auto d = static_cast<double>(nbrs.size());
    triples += d * (d - 1.0) / 2.0;
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) closed += A(nbrs[a], nbrs[b]);
    }
  }
  return triples > 0.0 ? closed / triples : 0.0;
}

PathLength average_path_length(const AdjacencyMatrix& A) {
  const int V = A.nodes();
  if (A.edge_total() == 0) return {0.0, true};
  std::vector<int> dist(V);
  std::vector<int> queue(V);
  double total = 0.0;
  double pairs = 0.0;
  for (int s = 0; s < V; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    int head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const int x = queue[head++];
      for (int y = 0; y < V; ++y) {
        if (A(x, y) && dist[y] < 0) {
          dist[y] = dist[x] + 1;
          queue[tail++] = y;
          total += dist[y];
          pairs += 1.0;
        }
      }
    }
  }
  return {total / pairs, false};
}

double block_assortativity(const AdjacencyMatrix& A, const BlockPartition& p) {
  const int V = A.nodes();
  if (p.nodes() != V) throw InvalidArgument("block_assortativity: partition size does not match graph");
  std::vector<int> distinct = p.labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int B = static_cast<int>(distinct.size());
  std::vector<std::size_t> block(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    block[v] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), p.labels[v]) - distinct.begin());
  }
  std::vector<double> mixing(static_cast<std::size_t>(B) * B, 0.0);
  double ends = 0.0;
  for (int v = 0; v < V; ++v) {
    for (int u = 0; u < V; ++u) {
      if (u != v && A(v, u)) {
        mixing[block[v] * B + block[u]] += 1.0;
        ends += 1.0;
      }
    }
  }
  if (ends == 0.0) throw UndefinedValue("block_assortativity: graph has no edges");
  double trace = 0.0, expected = 0.0;
  for (int b = 0; b < B; ++b) {
    double row = 0.0, col = 0.0;
    for (int c = 0; c < B; ++c) {
      row += mixing[static_cast<std::size_t>(b) * B + c];
      col += mixing[static_cast<std::size_t>(c) * B + b];
    }
    trace += mixing[static_cast<std::size_t>(b) * B + b] / ends;
    expected += (row / ends) * (col / ends);
  }
  if (std::abs(1.0 - expected) < 1e-12) throw UndefinedValue("block_assortativity: all edges fall in a single block");
  return (trace - expected) / (1.0 - expected);
}

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::Density: return "density";
    case Statistic::Transitivity: return "transitivity";
    case Statistic::AveragePathLength: return "average_path_length";
    case Statistic::Assortativity: return "assortativity";
  }
  return "unknown";
}

Statistic parse_statistic(std::string_view name) {
  for (auto s : {Statistic::Density, Statistic::Transitivity, Statistic::AveragePathLength, Statistic::Assortativity}) {
    if (statistic_name(s) == name) return s;
  }
  throw InvalidArgument("unknown statistic '" + std::string(name) + "'");
}

double compute_statistic(Statistic s, const AdjacencyMatrix& A, const BlockPartition* blocks) {
  switch (s) {
    case Statistic::Density: return density(A);
    case Statistic::Transitivity: return transitivity(A);
    case Statistic::AveragePathLength: return average_path_length(A).value;
    case Statistic::Assortativity:
      if (blocks == nullptr) throw InvalidArgument("assortativity needs a block partition");
      try {
        return block_assortativity(A, *blocks);
      } catch (const UndefinedValue&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace netresp
