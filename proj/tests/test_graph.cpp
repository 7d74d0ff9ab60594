#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "ggm/errors.hpp"
#include "ggm/graph.hpp"
#include "oracle.hpp"

using namespace ggm;

namespace {

VertexSet vs(std::initializer_list<int> one_based) {
  VertexSet s = 0;
  for (int v : one_based) s |= VertexSet{1} << (v - 1);
  return s;
}

Graph cycle4() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 0);
  return g;
}

void check_perfect(const Graph& g, const PerfectSequence& seq) {
  REQUIRE(seq.separators.size() + 1 == seq.cliques.size());
  REQUIRE(seq.history.size() == seq.separators.size());
  VertexSet seen = seq.cliques.front();
  for (std::size_t i = 1; i < seq.cliques.size(); ++i) {
    const VertexSet c = seq.cliques[i];
    CHECK(g.is_complete(c));
    CHECK(seq.separators[i - 1] == (c & seen));
    CHECK(seq.history[i - 1] < static_cast<int>(i));
    CHECK(is_subset(seq.separators[i - 1], seq.cliques[seq.history[i - 1]]));
    seen |= c;
  }
  CHECK(seen == g.all_vertices());
}

std::set<VertexSet> as_set(const std::vector<VertexSet>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("edge indexing") {
  CHECK(edge_index(0, 1, 4) == 0);
  CHECK(edge_index(0, 3, 4) == 2);
  CHECK(edge_index(1, 2, 4) == 3);
  CHECK(edge_index(2, 3, 4) == 5);
  CHECK(edge_index(3, 2, 4) == 5);
  for (int p = 2; p <= 12; ++p)
    for (int e = 0; e < num_pairs(p); ++e) {
      auto [i, j] = edge_endpoints(e, p);
      CHECK(i < j);
      CHECK(edge_index(i, j, p) == e);
    }
}

TEST_CASE("hex ids") {
  CHECK(Graph(1).id_hex() == "0");
  CHECK(Graph(2).id_hex() == "0");
  CHECK(Graph(3).with_edge(0, 1).id_hex() == "1");
  CHECK(Graph(3).with_edge(1, 2).id_hex() == "4");
  CHECK(Graph::complete(4).id_hex() == "3f");
  CHECK(Graph(9).id_hex().size() == 9);
  const Graph f = figure1_graph();
  CHECK(Graph::from_hex(9, f.id_hex()) == f);
  CHECK(Graph::from_hex(9, "0" + f.id_hex()) == f);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const int p = 2 + t % 20;
    Graph g(p);
    for (int e = 0; e < num_pairs(p); ++e)
      if (rng() & 1) g = g.toggled(e);
    CHECK(Graph::from_hex(p, g.id_hex()) == g);
  }
  CHECK_THROWS_AS(Graph::from_hex(3, "zz"), DomainError);
  CHECK_THROWS_AS(Graph::from_hex(3, "ff"), DomainError);
}

TEST_CASE("graph ordering follows the edge bitset") {
  CHECK(Graph(4) < Graph(4).with_edge(0, 1));
  CHECK(Graph(4).with_edge(0, 1) < Graph(4).with_edge(0, 2));
  CHECK(Graph(4).with_edge(0, 3) < Graph(4).with_edge(1, 2));
}

TEST_CASE("is_decomposable basics") {
  CHECK(is_decomposable(Graph::complete(4)));
  CHECK_FALSE(is_decomposable(cycle4()));
  CHECK(is_decomposable(cycle4().with_edge(0, 2)));
  CHECK(is_decomposable(figure1_graph()));
  CHECK(is_decomposable(Graph(0)));
  CHECK(is_decomposable(Graph(1)));
  Graph c5(5);
  for (int i = 0; i < 5; ++i) c5.add_edge(i, (i + 1) % 5);
  CHECK_FALSE(is_decomposable(c5));
}

TEST_CASE("figure 1 graph") {
  const Graph g = figure1_graph();
  CHECK(g.num_vertices() == 9);
  CHECK(g.edge_count() == 17);
  const auto seq = perfect_sequence(g);
  check_perfect(g, seq);
  CHECK(as_set(seq.cliques) ==
        std::set<VertexSet>{vs({1, 2, 3}), vs({2, 3, 5, 6}), vs({2, 4, 5}), vs({5, 6, 7}), vs({6, 7, 8, 9})});
  auto seps = seq.separators;
  std::sort(seps.begin(), seps.end());
  std::vector<VertexSet> expected{vs({2, 3}), vs({2, 5}), vs({5, 6}), vs({6, 7})};
  std::sort(expected.begin(), expected.end());
  CHECK(seps == expected);
  CHECK(clique_size_statistic(seq) == 43);

  const auto del = legal_deletions(g);
  CHECK(std::find(del.begin(), del.end(), edge_index(1, 2, 9)) == del.end());
  CHECK(del == oracle::legal_by_toggle(g, false));
  CHECK(legal_additions(g) == oracle::legal_by_toggle(g, true));
}

TEST_CASE("perfect_sequence small cases") {
  const auto one = perfect_sequence(Graph(1));
  CHECK(one.cliques == std::vector<VertexSet>{1u});
  CHECK(one.separators.empty());

  const auto empty3 = perfect_sequence(Graph(3));
  CHECK(as_set(empty3.cliques) == std::set<VertexSet>{1u, 2u, 4u});
  CHECK(empty3.separators == std::vector<VertexSet>{0u, 0u});

  CHECK_THROWS_AS(perfect_sequence(cycle4()), NotDecomposable);
}

TEST_CASE("legal moves small cases") {
  CHECK(legal_deletions(Graph::complete(3)).size() == 3);
  CHECK(legal_deletions(Graph(5)).empty());
  CHECK(legal_additions(Graph::complete(5)).empty());
  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  CHECK(legal_additions(path) == std::vector<int>{edge_index(0, 2, 3)});
  // every addition to the empty graph and every deletion of a tree edge is legal
  CHECK(legal_additions(Graph(5)).size() == 10);
  CHECK(legal_deletions(path).size() == 2);
  // closing a 4-cycle is illegal
  Graph p4(4);
  p4.add_edge(0, 1);
  p4.add_edge(1, 2);
  p4.add_edge(2, 3);
  const auto add = legal_additions(p4);
  CHECK(std::find(add.begin(), add.end(), edge_index(0, 3, 4)) == add.end());
}

TEST_CASE("decomposable counts") {
  CHECK(count_decomposable(1) == 1);
  CHECK(count_decomposable(2) == 2);
  CHECK(count_decomposable(3) == 8);
  CHECK(count_decomposable(4) == 61);
  CHECK(count_decomposable(5) == 822);
  CHECK(count_decomposable(6) == 18154);
  CHECK(count_decomposable(6, 1) == 18154);
  CHECK_THROWS_AS(count_decomposable(9), TooLarge);

  std::uint64_t visited = 0;
  Graph prev;
  bool ascending = true;
  for_each_decomposable(5, [&](const Graph& g) {
    if (visited > 0 && !(prev < g)) ascending = false;
    prev = g;
    ++visited;
  });
  CHECK(visited == 822);
  CHECK(ascending);
}

TEST_CASE("is_decomposable agrees with elimination oracle on every graph up to p = 6") {
  for (int p = 1; p <= 6; ++p) {
    const std::uint64_t total = std::uint64_t{1} << num_pairs(p);
    std::uint64_t mismatches = 0;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      const Graph g = Graph::from_edge_bits(p, bits);
      mismatches += is_decomposable(g) != oracle::chordal(g);
    }
    CHECK_MESSAGE(mismatches == 0, "p=" << p);
  }
}

TEST_CASE("legal moves agree with toggle-then-test oracle, exhaustive to p = 6") {
  for (int p = 2; p <= 6; ++p) {
    long bad = 0;
    for_each_decomposable(p, [&](const Graph& g) {
      bad += legal_additions(g) != oracle::legal_by_toggle(g, true);
      bad += legal_deletions(g) != oracle::legal_by_toggle(g, false);
    });
    CHECK_MESSAGE(bad == 0, "p=" << p);
  }
}

TEST_CASE("legal moves agree with oracle on random graphs at p = 10 and p = 14") {
  std::mt19937_64 rng(11);
  for (int p : {10, 14}) {
    for (int t = 0; t < 300; ++t) {
      const Graph g = oracle::random_chordal(p, rng);
      REQUIRE(is_decomposable(g));
      CHECK(legal_additions(g) == oracle::legal_by_toggle(g, true));
      CHECK(legal_deletions(g) == oracle::legal_by_toggle(g, false));
    }
  }
}

TEST_CASE("perfect sequences under random tie-breaking") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int p = 1 + t % 12;
    const Graph g = oracle::random_chordal(p, rng);
    const auto base = perfect_sequence(g);
    check_perfect(g, base);
    std::vector<int> rank(p);
    std::iota(rank.begin(), rank.end(), 0);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(rank.begin(), rank.end(), rng);
      const auto seq = perfect_sequence(g, rank);
      check_perfect(g, seq);
      CHECK(as_set(seq.cliques) == as_set(base.cliques));
      auto a = seq.separators, b = base.separators;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
      CHECK(clique_size_statistic(seq) == clique_size_statistic(base));
    }
    // sum |C|^2 - sum |S|^2 equals p + 2 * (edge count)
    CHECK(clique_size_statistic(base) == p + 2 * g.edge_count());
  }
}

TEST_CASE("from_cliques and dot") {
  const VertexSet cl[] = {vs({1, 2, 3}), vs({3, 4})};
  const Graph g = Graph::from_cliques(4, cl);
  CHECK(g.edge_count() == 4);
  const std::string dot = to_dot(g, "T");
  CHECK(dot.find("graph T") != std::string::npos);
  CHECK(dot.find("3 -- 4") != std::string::npos);
}
