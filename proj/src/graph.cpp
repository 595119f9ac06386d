#include "fracdim/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>

#include "fracdim/errors.hpp"

namespace fracdim {

Graph Graph::from_edges(std::size_t vertex_count, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u == e.v) throw InvalidArgument("self loop at vertex " + std::to_string(e.u));
    if (e.u >= vertex_count || e.v >= vertex_count) throw InvalidArgument("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw InvalidArgument("duplicate edge");

  Graph g;
  g.edges_ = std::move(edges);
  g.offsets_.assign(vertex_count + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < vertex_count; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.targets_.resize(2 * g.edges_.size());
  g.edge_ids_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t id = 0; id < g.edges_.size(); ++id) {
    const auto& e = g.edges_[id];
    g.targets_[cursor[e.u]] = e.v;
    g.edge_ids_[cursor[e.u]++] = id;
    g.targets_[cursor[e.v]] = e.u;
    g.edge_ids_[cursor[e.v]++] = id;
  }
  // Edges are sorted, so each adjacency row is already ordered by neighbor for
  // the u-side; sort rows fully to make neighbor order canonical.
  for (std::size_t v = 0; v < vertex_count; ++v) {
    const auto lo = g.offsets_[v];
    const auto hi = g.offsets_[v + 1];
    std::vector<std::pair<Vertex, std::size_t>> row;
    row.reserve(hi - lo);
    for (auto k = lo; k < hi; ++k) row.emplace_back(g.targets_[k], g.edge_ids_[k]);
    std::sort(row.begin(), row.end());
    for (auto k = lo; k < hi; ++k) {
      g.targets_[k] = row[k - lo].first;
      g.edge_ids_[k] = row[k - lo].second;
    }
  }
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (Vertex v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
  return best;
}

std::optional<std::size_t> Graph::find_edge(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return incident_edges(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<std::int64_t> bfs_distances(const Graph& g, std::span<const Vertex> sources) {
  std::vector<std::int64_t> dist(g.vertex_count(), kUnreachable);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (s >= g.vertex_count()) throw InvalidArgument("BFS source out of range");
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] != kUnreachable) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  const Vertex root = 0;
  const auto dist = bfs_distances(g, std::span<const Vertex>(&root, 1));
  return std::none_of(dist.begin(), dist.end(), [](std::int64_t d) { return d == kUnreachable; });
}

std::optional<std::vector<int>> two_coloring(const Graph& g) {
  std::vector<int> color(g.vertex_count(), -1);
  std::deque<Vertex> queue;
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    if (color[root] != -1) continue;
    color[root] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      const Vertex x = queue.front();
      queue.pop_front();
      for (Vertex y : g.neighbors(x)) {
        if (color[y] == -1) {
          color[y] = 1 - color[x];
          queue.push_back(y);
        } else if (color[y] == color[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

Graph without_edge(const Graph& g, std::size_t edge_id) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(edge_id));
  return Graph::from_edges(g.vertex_count(), std::move(edges));
}

Graph with_edge(const Graph& g, Edge e) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.push_back(e);
  return Graph::from_edges(g.vertex_count(), std::move(edges));
}

Graph path_graph(std::size_t vertex_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < vertex_count; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(vertex_count, std::move(edges));
}

Graph cycle_graph(std::size_t vertex_count) {
  if (vertex_count < 3) throw InvalidArgument("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertex_count; ++i) edges.push_back({i, (i + 1) % vertex_count});
  return Graph::from_edges(vertex_count, std::move(edges));
}

Graph complete_graph(std::size_t vertex_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertex_count; ++i)
    for (std::size_t j = i + 1; j < vertex_count; ++j) edges.push_back({i, j});
  return Graph::from_edges(vertex_count, std::move(edges));
}

}  // namespace fracdim
