#pragma once

#include <string_view>

#include "netresp/network.hpp"

namespace netresp {

// Fraction of node pairs that are connected.
double density(const AdjacencyMatrix& A);

// Global transitivity: 3 * triangles / connected triples, 0 without triples.
double transitivity(const AdjacencyMatrix& A);

struct PathLength {
  double value = 0.0;
  bool edgeless = false;  // set when the graph has no edges; value is then 0
};

// Mean shortest-path length over ordered pairs of distinct, mutually
// reachable nodes. Pairs in different components do not enter the average.
PathLength average_path_length(const AdjacencyMatrix& A);

// Newman's categorical assortativity of the block labels. Throws
// UndefinedValue for an edgeless graph, or when every edge end sits in one
// block (the coefficient is 0/0).
double block_assortativity(const AdjacencyMatrix& A, const BlockPartition& p);

enum class Statistic { Density, Transitivity, AveragePathLength, Assortativity };

std::string_view statistic_name(Statistic s);
Statistic parse_statistic(std::string_view name);

// Evaluates one statistic; Assortativity needs a partition. Undefined values
// come back as NaN instead of throwing.
double compute_statistic(Statistic s, const AdjacencyMatrix& A, const BlockPartition* blocks);

}  // namespace netresp
