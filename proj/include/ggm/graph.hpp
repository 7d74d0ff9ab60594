#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ggm {

inline constexpr int kMaxVertices = 32;

/// Bitmask over vertex indices 0..p-1 (bit v set means vertex v is present).
using VertexSet = std::uint32_t;

inline int set_size(VertexSet s) { return __builtin_popcount(s); }
inline bool is_subset(VertexSet a, VertexSet b) { return (a & ~b) == 0; }

/// Vertices of `s` in increasing order.
std::vector<int> set_members(VertexSet s);

/// Number of unordered vertex pairs, m = p(p-1)/2.
constexpr int num_pairs(int p) { return p * (p - 1) / 2; }

/// Lexicographic index of the pair (i, j), 0 <= i < j < p:
/// (0,1) -> 0, (0,2) -> 1, ..., (p-2,p-1) -> m-1.
constexpr int edge_index(int i, int j, int p) {
  if (i > j) std::swap(i, j);
  return i * (2 * p - i - 1) / 2 + (j - i - 1);
}

/// Inverse of edge_index.
std::pair<int, int> edge_endpoints(int index, int p);

/// Undirected simple graph on p <= 32 labelled vertices.
///
/// Vertices are 0-based in the API; serialized forms (hex IDs, DOT) use the
/// 1-based labels. The canonical identity of a graph is its edge bitset over
/// the m unordered pairs in lexicographic order, least significant bit = (1,2).
class Graph {
 public:
  Graph() = default;
  explicit Graph(int p);

  static Graph complete(int p);
  /// Builds from the low m bits of `bits`; requires m <= 64.
  static Graph from_edge_bits(int p, std::uint64_t bits);
  /// Parses the lowercase (or uppercase) hex ID produced by id_hex().
  static Graph from_hex(int p, std::string_view hex);
  /// Union of complete subgraphs on each vertex set.
  static Graph from_cliques(int p, std::span<const VertexSet> cliques);

  int num_vertices() const { return p_; }
  int num_pairs() const { return ggm::num_pairs(p_); }
  int edge_count() const;

  bool has_edge(int i, int j) const { return (adj_[i] >> j) & 1u; }
  void add_edge(int i, int j);
  void remove_edge(int i, int j);
  Graph with_edge(int i, int j) const;
  Graph without_edge(int i, int j) const;
  /// Flips the pair with lexicographic index `e`.
  Graph toggled(int e) const;

  VertexSet neighbors(int v) const { return adj_[v]; }
  VertexSet all_vertices() const { return p_ == 32 ? ~VertexSet{0} : ((VertexSet{1} << p_) - 1); }
  bool is_complete(VertexSet s) const;

  /// Edge bitset as little-endian 64-bit words.
  std::vector<std::uint64_t> edge_words() const;
  /// Low 64 bits of the edge bitset (the whole bitset for p <= 11).
  std::uint64_t edge_bits() const;
  /// Fixed-width lowercase hex of the edge bitset, ceil(m/4) digits ("0" when m = 0).
  std::string id_hex() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.p_ == b.p_ && a.adj_ == b.adj_; }
  friend bool operator<(const Graph& a, const Graph& b);

  std::size_t hash() const;

 private:
  int p_ = 0;
  std::array<VertexSet, kMaxVertices> adj_{};
};

struct GraphHash {
  std::size_t operator()(const Graph& g) const { return g.hash(); }
};

/// Cliques in a perfect order with their separators.
///
/// separators[i] and history[i] describe clique i + 1: S = C_{i+1} ∩ (C_0 ∪ ... ∪ C_i)
/// and S ⊆ C_{history[i]}.
struct PerfectSequence {
  std::vector<VertexSet> cliques;
  std::vector<VertexSet> separators;
  std::vector<int> history;
};

/// Maximum cardinality search visiting order. Ties go to the vertex with the
/// lowest `rank` (defaults to the vertex index).
std::vector<int> mcs_order(const Graph& g, std::span<const int> rank = {});

bool is_decomposable(const Graph& g);

/// Throws NotDecomposable when g is not chordal.
PerfectSequence perfect_sequence(const Graph& g, std::span<const int> rank = {});

/// Edges whose removal keeps g decomposable (ascending edge index).
std::vector<int> legal_deletions(const Graph& g);
/// Non-edges whose addition keeps g decomposable (ascending edge index).
std::vector<int> legal_additions(const Graph& g);

/// Sum of |C|^2 over cliques minus sum of |S|^2 over separators.
int clique_size_statistic(const PerfectSequence& seq);

/// Exhaustive count of decomposable graphs on p labelled vertices (p <= 8).
std::uint64_t count_decomposable(int p, unsigned threads = 0);

/// Calls `visit` for every decomposable graph on p <= 8 vertices, in ascending ID order.
void for_each_decomposable(int p, const std::function<void(const Graph&)>& visit);

/// The 9-vertex benchmark graph with cliques {1,2,3}, {2,3,5,6}, {2,4,5}, {5,6,7}, {6,7,8,9}.
Graph figure1_graph();

/// Graphviz rendering with 1-based vertex labels.
std::string to_dot(const Graph& g, std::string_view name = "G",
                   std::span<const std::string> labels = {});

}  // namespace ggm
