#pragma once

// Reference implementations used only by the tests. They deliberately avoid the
// library's own graph routines.

#include <random>
#include <vector>

#include "ggm/graph.hpp"

namespace oracle {

// chordal iff vertices can be removed one simplicial vertex at a time
inline bool chordal(const ggm::Graph& g) {
  const int p = g.num_vertices();
  std::vector<bool> alive(p, true);
  for (int removed = 0; removed < p; ++removed) {
    int found = -1;
    for (int v = 0; v < p && found < 0; ++v) {
      if (!alive[v]) continue;
      std::vector<int> nb;
      for (int u = 0; u < p; ++u)
        if (alive[u] && u != v && g.has_edge(u, v)) nb.push_back(u);
      bool clique = true;
      for (std::size_t a = 0; a < nb.size() && clique; ++a)
        for (std::size_t b = a + 1; b < nb.size() && clique; ++b) clique = g.has_edge(nb[a], nb[b]);
      if (clique) found = v;
    }
    if (found < 0) return false;
    alive[found] = false;
  }
  return true;
}

inline std::vector<int> legal_by_toggle(const ggm::Graph& g, bool additions) {
  std::vector<int> out;
  const int p = g.num_vertices();
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      if (g.has_edge(i, j) == additions) continue;
      ggm::Graph h = additions ? g.with_edge(i, j) : g.without_edge(i, j);
      if (chordal(h)) out.push_back(ggm::edge_index(i, j, p));
    }
  return out;
}

// random chordal graph: random edge insertions filtered by the chordality check
template <class Rng>
ggm::Graph random_chordal(int p, Rng& rng) {
  ggm::Graph g(p);
  const int m = ggm::num_pairs(p);
  const int attempts = std::uniform_int_distribution<int>(0, 3 * m)(rng);
  std::uniform_int_distribution<int> pick(0, m - 1);
  for (int t = 0; t < attempts; ++t) {
    ggm::Graph h = g.toggled(pick(rng));
    if (chordal(h)) g = h;
  }
  return g;
}

}  // namespace oracle
