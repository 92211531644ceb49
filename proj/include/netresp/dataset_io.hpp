#pragma once

#include <filesystem>
#include <string>

#include "netresp/network.hpp"

namespace netresp {

// Text dataset format:
//
//   V=<int> n=<int>
//   <subject_id>, <trait>, e_1 e_2 ... e_{V(V-1)/2}
//
// with e_l in {0, 1, ?} ('?' marks a held-out cell) in pair_to_index order.
// A row may instead carry all V*V entries of the adjacency matrix
// (row-major, no '?'); it is then checked for symmetry and a zero diagonal.
// Blank lines and lines starting with '#' are ignored.
NetworkDataset read_dataset(std::istream& in);
NetworkDataset load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const NetworkDataset& ds);
void save_dataset(const NetworkDataset& ds, const std::filesystem::path& path);

// Edge-list ingestion: rows `subject_id,node_v,node_u` (1-based nodes) plus a
// trait table `subject_id,trait`. Pairs not listed are absent. Subjects keep
// the order of the trait table. V = 0 infers the node count from the largest
// node id seen.
NetworkDataset load_edge_list(const std::filesystem::path& edges_csv, const std::filesystem::path& traits_csv,
                              int V = 0);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace netresp
