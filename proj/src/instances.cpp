#include "hardmatch/instances.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "hardmatch/errors.hpp"

namespace hardmatch {

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  std::set<Edge> seen;
  incident_.assign(num_vertices_, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    Edge& edge = edges_[e];
    if (edge.u > edge.v) std::swap(edge.u, edge.v);
    if (edge.u == edge.v)
      throw InputError("self-loop on vertex " + std::to_string(edge.u));
    if (edge.v >= num_vertices_)
      throw InputError("edge endpoint " + std::to_string(edge.v) +
                       " out of range");
    if (!seen.insert(edge).second)
      throw InputError("duplicate edge (" + std::to_string(edge.u) + "," +
                       std::to_string(edge.v) + ")");
    incident_[edge.u].push_back(e);
    incident_[edge.v].push_back(e);
  }
}

bool Graph::edges_share_vertex(std::size_t a, std::size_t b) const {
  const Edge& x = edges_.at(a);
  const Edge& y = edges_.at(b);
  return x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v;
}

Graph Graph::sorted() const {
  std::vector<Edge> edges = edges_;
  std::sort(edges.begin(), edges.end());
  Graph g(num_vertices_, std::move(edges));
  g.vertex_labels = vertex_labels;
  return g;
}

Matching::Matching(std::vector<std::size_t> edges)
    : selected_edges(std::move(edges)) {
  std::sort(selected_edges.begin(), selected_edges.end());
  selected_edges.erase(
      std::unique(selected_edges.begin(), selected_edges.end()),
      selected_edges.end());
}

Vertex gn_vertex(std::uint32_t n, Side side, std::uint32_t layer,
                 std::uint32_t position) {
  const std::uint32_t width = n + 1;
  const Vertex base = side == Side::A ? 0 : width * width;
  return base + layer * width + position;
}

GnInstance generate_gn(std::uint32_t n, EdgeOrder order) {
  const std::uint32_t width = n + 1;
  const std::size_t num_vertices = 2 * std::size_t{width} * width;

  GnInstance inst;
  inst.n = n;
  inst.order = order;
  inst.layer_of_vertex.resize(num_vertices);
  std::map<Vertex, std::string> labels;
  for (std::uint32_t i = 0; i < width; ++i) {
    for (std::uint32_t j = 0; j < width; ++j) {
      const Vertex a = gn_vertex(n, Side::A, i, j);
      const Vertex b = gn_vertex(n, Side::B, i, j);
      inst.layer_of_vertex[a] = {Side::A, i, j};
      inst.layer_of_vertex[b] = {Side::B, i, j};
      labels[a] = "A" + std::to_string(i) + "_" + std::to_string(j);
      labels[b] = "B" + std::to_string(i) + "_" + std::to_string(j);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(std::size_t{width} * width * width);
  auto add_sparse = [&](std::uint32_t i) {
    for (std::uint32_t j = 0; j < width; ++j) {
      inst.canonical_matching.push_back(edges.size());
      edges.push_back({gn_vertex(n, Side::A, i, j), gn_vertex(n, Side::B, i, j)});
    }
  };
  // The dense block joins B(i) to A(i+1); there is no A(n+1).
  auto add_dense = [&](std::uint32_t i) {
    for (std::uint32_t j = 0; j < width; ++j)
      for (std::uint32_t k = 0; k < width; ++k)
        edges.push_back(
            {gn_vertex(n, Side::B, i, j), gn_vertex(n, Side::A, i + 1, k)});
  };

  switch (order) {
    case EdgeOrder::layered:
      for (std::uint32_t i = 0; i < width; ++i) {
        add_sparse(i);
        if (i < n) add_dense(i);
      }
      break;
    case EdgeOrder::sparse_first:
      for (std::uint32_t i = 0; i < width; ++i) add_sparse(i);
      for (std::uint32_t i = 0; i < n; ++i) add_dense(i);
      break;
  }

  inst.graph = Graph(num_vertices, std::move(edges));
  inst.graph.vertex_labels = std::move(labels);
  return inst;
}

std::size_t optimum_matching_cardinality(const GnInstance& inst) {
  const std::size_t width = inst.n + 1;
  return width * width;
}

MatchingReport validate_matching(const Graph& g, const Matching& m) {
  MatchingReport report;
  report.coverage.assign(g.num_vertices(), 0);
  for (std::size_t e : m.selected_edges) {
    if (e >= g.num_edges())
      throw InputError("unknown edge index " + std::to_string(e));
    const Edge& edge = g.edge(e);
    ++report.coverage[edge.u];
    ++report.coverage[edge.v];
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (report.coverage[v] >= 2) {
      report.valid = false;
      report.over_covered.emplace_back(v, report.coverage[v]);
    }
  }
  return report;
}

namespace {

struct MatchingSearch {
  const Graph& graph;
  std::vector<bool> used;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  std::size_t bound = 0;  // size of a maximum matching cannot exceed this

  void run(std::size_t e) {
    if (best.size() == bound) return;
    if (current.size() + (graph.num_edges() - e) <= best.size()) return;
    if (e == graph.num_edges()) {
      best = current;
      return;
    }
    const Edge& edge = graph.edge(e);
    if (!used[edge.u] && !used[edge.v]) {
      used[edge.u] = used[edge.v] = true;
      current.push_back(e);
      run(e + 1);
      current.pop_back();
      used[edge.u] = used[edge.v] = false;
    }
    run(e + 1);
  }
};

}  // namespace

MaxMatching brute_force_max_matching(const Graph& g) {
  if (g.num_edges() > kMaxBruteForceEdges)
    throw SizeError("brute_force_max_matching: " +
                    std::to_string(g.num_edges()) + " edges exceeds limit " +
                    std::to_string(kMaxBruteForceEdges));
  MatchingSearch search{g, std::vector<bool>(g.num_vertices(), false), {}, {},
                        g.num_vertices() / 2};
  search.run(0);
  return {search.best.size(), Matching(search.best)};
}

Matching matching_from_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::size_t> edges;
  for (std::size_t e = 0; e < bits.size(); ++e)
    if (bits[e]) edges.push_back(e);
  return Matching(std::move(edges));
}

std::vector<std::uint8_t> bits_from_matching(const Matching& m,
                                             std::size_t num_edges) {
  std::vector<std::uint8_t> bits(num_edges, 0);
  for (std::size_t e : m.selected_edges) {
    if (e >= num_edges)
      throw InputError("unknown edge index " + std::to_string(e));
    bits[e] = 1;
  }
  return bits;
}

}  // namespace hardmatch
