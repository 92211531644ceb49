#include <doctest.h>

#include <set>

#include "netresp/errors.hpp"
#include "netresp/network.hpp"
#include "support.hpp"

using namespace netresp;

TEST_CASE("pair_to_index follows the column-wise lower triangle") {
  CHECK(pair_to_index(2, 1, 4) == 1);
  CHECK(pair_to_index(3, 1, 4) == 2);
  CHECK(pair_to_index(4, 1, 4) == 3);
  CHECK(pair_to_index(3, 2, 4) == 4);
  CHECK(pair_to_index(4, 2, 4) == 5);
  CHECK(pair_to_index(4, 3, 4) == 6);
}

TEST_CASE("pair_to_index rejects invalid pairs") {
  CHECK_THROWS_AS(pair_to_index(1, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(pair_to_index(1, 2, 4), InvalidArgument);
  CHECK_THROWS_AS(pair_to_index(5, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(pair_to_index(2, 0, 4), InvalidArgument);
  CHECK_THROWS_AS(index_to_pair(0, 4), InvalidArgument);
  CHECK_THROWS_AS(index_to_pair(7, 4), InvalidArgument);
}

TEST_CASE("pair_to_index and index_to_pair are inverse bijections") {
  for (int V = 2; V <= 30; ++V) {
    std::set<std::size_t> seen;
    for (int u = 1; u <= V; ++u) {
      for (int v = u + 1; v <= V; ++v) {
        const auto l = pair_to_index(v, u, V);
        REQUIRE(l >= 1);
        REQUIRE(l <= edge_count(V));
        REQUIRE(index_to_pair(l, V) == std::pair{v, u});
        seen.insert(l);
      }
    }
    CHECK(seen.size() == edge_count(V));
  }
}

TEST_CASE("EdgeIndexer agrees with pair_to_index") {
  const int V = 9;
  const EdgeIndexer idx(V);
  CHECK(idx.edges() == edge_count(V));
  for (std::size_t l = 0; l < idx.edges(); ++l) {
    const auto [v, u] = idx.pair(l);
    CHECK(v > u);
    CHECK(pair_to_index(v + 1, u + 1, V) == l + 1);
    CHECK(idx.index(v, u) == l);
    CHECK(idx.index(u, v) == l);
  }
  for (int v = 0; v < V; ++v) {
    const auto& nb = idx.neighbours(v);
    REQUIRE(nb.size() == static_cast<std::size_t>(V - 1));
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t k = 0; k < nb.size(); ++k) CHECK(idx.incident_edges(v)[k] == idx.index(v, nb[k]));
  }
}

TEST_CASE("vectorize examples") {
  AdjacencyMatrix tri(3);
  tri.set_edge(0, 1, true);
  tri.set_edge(0, 2, true);
  tri.set_edge(1, 2, true);
  const EdgeVector e = vectorize(tri);
  CHECK(e.values == std::vector<EdgeState>(3, EdgeState::Present));
  CHECK(vectorize(AdjacencyMatrix(6)).values == std::vector<EdgeState>(15, EdgeState::Absent));
}

TEST_CASE("vectorize and devectorize round-trip exactly") {
  RngStream rng(8);
  for (int t = 0; t < 200; ++t) {
    const int V = 2 + static_cast<int>(rng.uniform_int(0, 28));
    const AdjacencyMatrix A = testing::random_graph(V, rng.uniform(), rng);
    const EdgeVector e = vectorize(A);
    REQUIRE(e.values.size() == edge_count(V));
    REQUIRE(devectorize(e) == A);
    REQUIRE(vectorize(devectorize(e)) == e);
  }
}

TEST_CASE("AdjacencyMatrix validates symmetry, diagonal and binary entries") {
  CHECK_THROWS_AS(AdjacencyMatrix(2, {0, 1, 0, 0}), ValidationError);
  CHECK_THROWS_AS(AdjacencyMatrix(2, {1, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(AdjacencyMatrix(2, {0, 2, 2, 0}), ValidationError);
  CHECK_THROWS_AS(AdjacencyMatrix(2, {0, 1, 1}), ValidationError);
  const AdjacencyMatrix ok(2, {0, 1, 1, 0});
  CHECK(ok(0, 1));
  CHECK(ok.degree(0) == 1);
  CHECK(ok.edge_total() == 1);
  AdjacencyMatrix A(3);
  CHECK_THROWS(A.set_edge(1, 1, true));
}

TEST_CASE("devectorize refuses missing cells and wrong lengths") {
  EdgeVector e{4, std::vector<EdgeState>(6, EdgeState::Absent)};
  e.values[2] = EdgeState::Missing;
  CHECK(e.has_missing());
  CHECK_THROWS_AS(devectorize(e), ValidationError);
  CHECK_THROWS_AS(devectorize(EdgeVector{4, std::vector<EdgeState>(5, EdgeState::Absent)}), ValidationError);
}

TEST_CASE("NetworkDataset derives unique traits and replicate counts") {
  std::vector<EdgeVector> nets(5, EdgeVector{3, std::vector<EdgeState>(3, EdgeState::Absent)});
  nets[1].values[0] = EdgeState::Missing;
  const NetworkDataset ds({"a", "b", "c", "d", "e"}, {2.0, 1.0, 2.0, 3.5, 1.0}, nets);
  CHECK(ds.nodes() == 3);
  CHECK(ds.subjects() == 5);
  CHECK(ds.edges() == 3);
  CHECK(ds.unique_traits() == std::vector<double>{1.0, 2.0, 3.5});
  CHECK(ds.trait_index() == std::vector<int>{1, 0, 1, 2, 0});
  CHECK(ds.replicate_counts() == std::vector<int>{2, 2, 1});
  CHECK(ds.missing_count() == 1);
  CHECK(ds.edge(1, 0) == EdgeState::Missing);
}

TEST_CASE("NetworkDataset rejects inconsistent input") {
  const EdgeVector e3{3, std::vector<EdgeState>(3, EdgeState::Absent)};
  const EdgeVector e4{4, std::vector<EdgeState>(6, EdgeState::Absent)};
  CHECK_THROWS_AS(NetworkDataset({"a", "b"}, {1.0, 2.0}, {e3, e4}), ValidationError);
  CHECK_THROWS_AS(NetworkDataset({"a"}, {1.0, 2.0}, {e3}), ValidationError);
  CHECK_THROWS_AS(NetworkDataset({"a"}, {std::nan("")}, {e3}), ValidationError);
}

TEST_CASE("BlockPartition counts distinct labels") {
  CHECK(BlockPartition{{0, 0, 1, 1, 3}}.block_count() == 3);
}
