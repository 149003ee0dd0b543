#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hardmatch {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;  // u < v once stored in a Graph

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph. Edges keep the order they were given in, after
// each pair is normalized to u < v; that order defines the edge indices used
// by every downstream model.
class Graph {
 public:
  Graph() = default;

  // Throws InputError on self-loops, duplicate edges or out-of-range endpoints.
  Graph(std::size_t num_vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }

  // Edge indices incident to v, ascending.
  const std::vector<std::size_t>& incident(Vertex v) const {
    return incident_.at(v);
  }

  bool edges_share_vertex(std::size_t a, std::size_t b) const;

  // Same graph with edges sorted lexicographically.
  Graph sorted() const;

  std::map<Vertex, std::string> vertex_labels;

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

// How generate_gn numbers the edges of G_n.
enum class EdgeOrder {
  // Layer by layer: sparse edges of layer i (by j), then the dense block
  // B(i) -> A(i+1) (by j, k). Reproduces the textbook 8x8 G_1 matrix.
  layered,
  // All sparse edges by (i, j), then all dense edges by (i, j, k). This is
  // the variable numbering of the D-Wave 2X reference runs for G_1.
  sparse_first,
};

enum class Side : std::uint8_t { A, B };

struct VertexLayer {
  Side side = Side::A;
  std::uint32_t layer = 0;
  std::uint32_t position = 0;

  friend bool operator==(const VertexLayer&, const VertexLayer&) = default;
};

struct GnInstance {
  std::uint32_t n = 0;
  EdgeOrder order = EdgeOrder::layered;
  Graph graph;
  std::vector<VertexLayer> layer_of_vertex;
  std::vector<std::size_t> canonical_matching;  // edge indices, ascending
};

// A set of edge indices; kept sorted and unique.
struct Matching {
  std::vector<std::size_t> selected_edges;

  Matching() = default;
  explicit Matching(std::vector<std::size_t> edges);
  std::size_t size() const noexcept { return selected_edges.size(); }
};

struct MatchingReport {
  bool valid = true;
  std::vector<std::uint32_t> coverage;                      // per vertex
  std::vector<std::pair<Vertex, std::uint32_t>> over_covered;  // count >= 2
};

struct MaxMatching {
  std::size_t cardinality = 0;
  Matching witness;
};

inline constexpr std::size_t kMaxBruteForceEdges = 28;

// Vertex ids: A(i)_j -> i(n+1)+j, B(i)_j -> (n+1)^2 + i(n+1)+j.
Vertex gn_vertex(std::uint32_t n, Side side, std::uint32_t layer,
                 std::uint32_t position);

GnInstance generate_gn(std::uint32_t n,
                       EdgeOrder order = EdgeOrder::layered);

std::size_t optimum_matching_cardinality(const GnInstance& inst);

MatchingReport validate_matching(const Graph& g, const Matching& m);

// Exhaustive search over matchings (include-first depth-first order; the
// witness is the first maximum found). Throws SizeError above
// kMaxBruteForceEdges edges.
MaxMatching brute_force_max_matching(const Graph& g);

// Decodes a 0/1 assignment over edges into the selected edge set.
Matching matching_from_bits(const std::vector<std::uint8_t>& bits);

std::vector<std::uint8_t> bits_from_matching(const Matching& m,
                                             std::size_t num_edges);

}  // namespace hardmatch
