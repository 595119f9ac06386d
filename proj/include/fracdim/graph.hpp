#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fracdim {

using Vertex = std::size_t;

/// Undirected edge, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph in compressed sparse row form.
///
/// Edges are kept sorted lexicographically; each adjacency slot carries the id
/// of the edge it came from so weights can be looked up per slot.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Orientation is normalized to u < v; self loops,
  /// duplicates and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const std::size_t> incident_edges(Vertex v) const {
    return {edge_ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;

  /// Edge id joining u and v, if any.
  std::optional<std::size_t> find_edge(Vertex u, Vertex v) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<std::size_t> edge_ids_;
  std::vector<Edge> edges_;
};

inline constexpr std::int64_t kUnreachable = -1;

/// Multi-source BFS hop distances; kUnreachable where no path exists.
std::vector<std::int64_t> bfs_distances(const Graph& g, std::span<const Vertex> sources);

bool is_connected(const Graph& g);

/// Proper 2-coloring if the graph is bipartite.
std::optional<std::vector<int>> two_coloring(const Graph& g);

/// Graph with one edge removed (ids of the remaining edges are re-sorted).
Graph without_edge(const Graph& g, std::size_t edge_id);

/// Graph with one extra edge; throws if it already exists.
Graph with_edge(const Graph& g, Edge e);

/// Small closed-form test networks.
Graph path_graph(std::size_t vertex_count);
Graph cycle_graph(std::size_t vertex_count);
Graph complete_graph(std::size_t vertex_count);

}  // namespace fracdim
