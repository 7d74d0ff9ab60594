#include "ggm/graph.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "ggm/errors.hpp"

namespace ggm {

namespace {

constexpr VertexSet bit(int v) { return VertexSet{1} << v; }

void check_vertex_count(int p) {
  if (p < 0 || p > kMaxVertices)
    throw DomainError("vertex count must be in [0, " + std::to_string(kMaxVertices) +
                      "], got " + std::to_string(p));
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Vertices reachable from `start` using only vertices in `allowed`.
VertexSet reach(const Graph& g, int start, VertexSet allowed) {
  VertexSet seen = bit(start);
  VertexSet frontier = seen;
  while (frontier) {
    VertexSet next = 0;
    for (VertexSet f = frontier; f; f &= f - 1) next |= g.neighbors(__builtin_ctz(f));
    next &= allowed & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

// Zero fill-in test of a visiting order: for every vertex, the previously
// visited neighbours minus the most recently visited one must be adjacent to it.
bool zero_fill_in(const Graph& g, std::span<const int> order) {
  std::array<int, kMaxVertices> pos{};
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  VertexSet seen = 0;
  for (int v : order) {
    const VertexSet earlier = g.neighbors(v) & seen;
    if (earlier) {
      int follower = -1;
      for (VertexSet e = earlier; e; e &= e - 1) {
        const int u = __builtin_ctz(e);
        if (follower < 0 || pos[u] > pos[follower]) follower = u;
      }
      if (!is_subset(earlier & ~bit(follower), g.neighbors(follower))) return false;
    }
    seen |= bit(v);
  }
  return true;
}

}  // namespace

std::vector<int> set_members(VertexSet s) {
  std::vector<int> out;
  out.reserve(set_size(s));
  for (; s; s &= s - 1) out.push_back(__builtin_ctz(s));
  return out;
}

std::pair<int, int> edge_endpoints(int index, int p) {
  int i = 0;
  int row = p - 1;
  while (index >= row) {
    index -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + index};
}

Graph::Graph(int p) : p_(p) { check_vertex_count(p); }

Graph Graph::complete(int p) {
  Graph g(p);
  for (int v = 0; v < p; ++v) g.adj_[v] = g.all_vertices() & ~bit(v);
  return g;
}

Graph Graph::from_edge_bits(int p, std::uint64_t bits) {
  Graph g(p);
  if (ggm::num_pairs(p) > 64) throw DomainError("from_edge_bits needs m <= 64");
  int e = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j, ++e)
      if ((bits >> e) & 1u) {
        g.adj_[i] |= bit(j);
        g.adj_[j] |= bit(i);
      }
  return g;
}

Graph Graph::from_hex(int p, std::string_view hex) {
  Graph g(p);
  const int m = g.num_pairs();
  int e = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
    const int d = hex_digit(*it);
    if (d < 0) throw DomainError("invalid hex graph id '" + std::string(hex) + "'");
    for (int b = 0; b < 4; ++b, ++e) {
      if (!((d >> b) & 1)) continue;
      if (e >= m) throw DomainError("hex graph id '" + std::string(hex) + "' has bits beyond m");
      auto [i, j] = edge_endpoints(e, p);
      g.add_edge(i, j);
    }
  }
  return g;
}

Graph Graph::from_cliques(int p, std::span<const VertexSet> cliques) {
  Graph g(p);
  for (VertexSet c : cliques)
    for (VertexSet s = c; s; s &= s - 1) {
      const int v = __builtin_ctz(s);
      g.adj_[v] |= c & ~bit(v);
    }
  return g;
}

int Graph::edge_count() const {
  int twice = 0;
  for (int v = 0; v < p_; ++v) twice += set_size(adj_[v]);
  return twice / 2;
}

void Graph::add_edge(int i, int j) {
  if (i == j) throw DomainError("self-loops are not allowed");
  adj_[i] |= bit(j);
  adj_[j] |= bit(i);
}

void Graph::remove_edge(int i, int j) {
  adj_[i] &= ~bit(j);
  adj_[j] &= ~bit(i);
}

Graph Graph::with_edge(int i, int j) const {
  Graph g = *this;
  g.add_edge(i, j);
  return g;
}

Graph Graph::without_edge(int i, int j) const {
  Graph g = *this;
  g.remove_edge(i, j);
  return g;
}

Graph Graph::toggled(int e) const {
  auto [i, j] = edge_endpoints(e, p_);
  return has_edge(i, j) ? without_edge(i, j) : with_edge(i, j);
}

bool Graph::is_complete(VertexSet s) const {
  for (VertexSet t = s; t; t &= t - 1) {
    const int v = __builtin_ctz(t);
    if (!is_subset(s & ~bit(v), adj_[v])) return false;
  }
  return true;
}

std::vector<std::uint64_t> Graph::edge_words() const {
  const int m = num_pairs();
  std::vector<std::uint64_t> words(std::max(1, (m + 63) / 64), 0);
  int e = 0;
  for (int i = 0; i < p_; ++i)
    for (int j = i + 1; j < p_; ++j, ++e)
      if (has_edge(i, j)) words[e / 64] |= std::uint64_t{1} << (e % 64);
  return words;
}

std::uint64_t Graph::edge_bits() const { return edge_words().front(); }

std::string Graph::id_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int m = num_pairs();
  if (m == 0) return "0";
  const auto words = edge_words();
  const int ndigits = (m + 3) / 4;
  std::string out(ndigits, '0');
  for (int d = 0; d < ndigits; ++d) {
    const int e = 4 * d;
    const unsigned nibble = (words[e / 64] >> (e % 64)) & 0xFu;
    out[ndigits - 1 - d] = kDigits[nibble];
  }
  return out;
}

bool operator<(const Graph& a, const Graph& b) {
  if (a.p_ != b.p_) return a.p_ < b.p_;
  const auto wa = a.edge_words();
  const auto wb = b.edge_words();
  return std::lexicographical_compare(wa.rbegin(), wa.rend(), wb.rbegin(), wb.rend());
}

std::size_t Graph::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(p_);
  for (int v = 0; v < p_; ++v) {
    h ^= adj_[v];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::vector<int> mcs_order(const Graph& g, std::span<const int> rank) {
  const int p = g.num_vertices();
  std::vector<int> order;
  order.reserve(p);
  std::array<int, kMaxVertices> weight{};
  VertexSet visited = 0;
  for (int step = 0; step < p; ++step) {
    int best = -1;
    for (int v = 0; v < p; ++v) {
      if (visited & bit(v)) continue;
      if (best < 0 || weight[v] > weight[best]) {
        best = v;
      } else if (weight[v] == weight[best] && !rank.empty() && rank[v] < rank[best]) {
        best = v;
      }
    }
    order.push_back(best);
    visited |= bit(best);
    for (VertexSet nb = g.neighbors(best) & ~visited; nb; nb &= nb - 1) ++weight[__builtin_ctz(nb)];
  }
  return order;
}

bool is_decomposable(const Graph& g) {
  const auto order = mcs_order(g);
  return zero_fill_in(g, order);
}

PerfectSequence perfect_sequence(const Graph& g, std::span<const int> rank) {
  const auto order = mcs_order(g, rank);
  if (!zero_fill_in(g, order)) throw NotDecomposable();

  // In MCS order, {v} ∪ (earlier neighbours of v) is complete; the maximal
  // such sets are exactly the cliques, and their order of appearance is perfect.
  const int p = g.num_vertices();
  std::vector<VertexSet> candidates(p);
  VertexSet seen = 0;
  for (int i = 0; i < p; ++i) {
    const int v = order[i];
    candidates[i] = bit(v) | (g.neighbors(v) & seen);
    seen |= bit(v);
  }

  PerfectSequence seq;
  for (int i = 0; i < p; ++i) {
    bool maximal = true;
    for (int j = i + 1; j < p && maximal; ++j)
      if (is_subset(candidates[i], candidates[j])) maximal = false;
    if (maximal) seq.cliques.push_back(candidates[i]);
  }

  VertexSet covered = seq.cliques.empty() ? 0 : seq.cliques.front();
  for (std::size_t i = 1; i < seq.cliques.size(); ++i) {
    const VertexSet sep = seq.cliques[i] & covered;
    int h = 0;
    while (!is_subset(sep, seq.cliques[h])) ++h;
    seq.separators.push_back(sep);
    seq.history.push_back(h);
    covered |= seq.cliques[i];
  }
  return seq;
}

std::vector<int> legal_deletions(const Graph& g) {
  const int p = g.num_vertices();
  std::vector<int> out;
  if (g.edge_count() == 0) return out;
  const auto seq = perfect_sequence(g);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      if (!g.has_edge(i, j)) continue;
      const VertexSet pair = bit(i) | bit(j);
      int holders = 0;
      for (VertexSet c : seq.cliques) holders += is_subset(pair, c);
      if (holders == 1) out.push_back(edge_index(i, j, p));
    }
  return out;
}

std::vector<int> legal_additions(const Graph& g) {
  // Adding uv to a chordal graph keeps it chordal iff every u-v path meets a
  // common neighbour of u and v (trivially true across components).
  const int p = g.num_vertices();
  std::vector<int> out;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      if (g.has_edge(i, j)) continue;
      const VertexSet common = g.neighbors(i) & g.neighbors(j);
      if (!(reach(g, i, g.all_vertices() & ~common) & bit(j))) out.push_back(edge_index(i, j, p));
    }
  return out;
}

int clique_size_statistic(const PerfectSequence& seq) {
  int total = 0;
  for (VertexSet c : seq.cliques) total += set_size(c) * set_size(c);
  for (VertexSet s : seq.separators) total -= set_size(s) * set_size(s);
  return total;
}

std::uint64_t count_decomposable(int p, unsigned threads) {
  if (p < 1) throw DomainError("count_decomposable needs p >= 1");
  if (p > 8) throw TooLarge("count_decomposable supports p <= 8, got " + std::to_string(p));
  const std::uint64_t total = std::uint64_t{1} << num_pairs(p);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));

  std::vector<std::uint64_t> partial(threads, 0);
  auto work = [&](unsigned t) {
    const std::uint64_t lo = total * t / threads;
    const std::uint64_t hi = total * (t + 1) / threads;
    std::uint64_t count = 0;
    for (std::uint64_t bits = lo; bits < hi; ++bits) count += is_decomposable(Graph::from_edge_bits(p, bits));
    partial[t] = count;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  std::uint64_t sum = 0;
  for (auto c : partial) sum += c;
  return sum;
}

void for_each_decomposable(int p, const std::function<void(const Graph&)>& visit) {
  if (p < 1) throw DomainError("for_each_decomposable needs p >= 1");
  if (p > 8) throw TooLarge("decomposable enumeration supports p <= 8, got " + std::to_string(p));
  const std::uint64_t total = std::uint64_t{1} << num_pairs(p);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const Graph g = Graph::from_edge_bits(p, bits);
    if (is_decomposable(g)) visit(g);
  }
}

Graph figure1_graph() {
  auto set = [](std::initializer_list<int> one_based) {
    VertexSet s = 0;
    for (int v : one_based) s |= bit(v - 1);
    return s;
  };
  const std::array<VertexSet, 5> cliques = {set({1, 2, 3}), set({2, 3, 5, 6}), set({2, 4, 5}),
                                            set({5, 6, 7}), set({6, 7, 8, 9})};
  return Graph::from_cliques(9, cliques);
}

std::string to_dot(const Graph& g, std::string_view name, std::span<const std::string> labels) {
  const int p = g.num_vertices();
  auto label = [&](int v) {
    return labels.size() == static_cast<std::size_t>(p) ? "\"" + labels[v] + "\"" : std::to_string(v + 1);
  };
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (int v = 0; v < p; ++v) out << "  " << label(v) << ";\n";
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (g.has_edge(i, j)) out << "  " << label(i) << " -- " << label(j) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ggm
