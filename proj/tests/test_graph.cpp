#include <gtest/gtest.h>

#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/graph.hpp"

using namespace fracdim;

TEST(Graph, NormalizesOrientationAndSorts) {
  const auto g = Graph::from_edges(4, {{3, 1}, {0, 2}, {1, 0}});
  ASSERT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.edge(0), (Edge{0, 1}));
  EXPECT_EQ(g.edge(1), (Edge{0, 2}));
  EXPECT_EQ(g.edge(2), (Edge{1, 3}));
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(3), 1u);
  EXPECT_EQ(g.find_edge(3, 1), std::optional<std::size_t>(2));
  EXPECT_FALSE(g.find_edge(2, 3).has_value());
}

TEST(Graph, RejectsBadEdges) {
  EXPECT_THROW(Graph::from_edges(3, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), InvalidArgument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {1, 0}}), InvalidArgument);
}

TEST(Graph, IncidentEdgesMatchNeighbors) {
  const auto g = complete_graph(5);
  for (Vertex v = 0; v < 5; ++v) {
    const auto nb = g.neighbors(v);
    const auto ids = g.incident_edges(v);
    ASSERT_EQ(nb.size(), ids.size());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto& e = g.edge(ids[i]);
      EXPECT_TRUE((e.u == v && e.v == nb[i]) || (e.v == v && e.u == nb[i]));
    }
  }
}

TEST(Graph, BfsAndConnectivity) {
  const auto p = path_graph(6);
  const std::vector<Vertex> src{0};
  const auto d = bfs_distances(p, src);
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(d[v], static_cast<std::int64_t>(v));
  EXPECT_TRUE(is_connected(p));

  const auto split = Graph::from_edges(4, {{0, 1}, {2, 3}});
  EXPECT_FALSE(is_connected(split));
  EXPECT_EQ(bfs_distances(split, src)[3], kUnreachable);
}

TEST(Graph, TwoColoring) {
  EXPECT_TRUE(two_coloring(cycle_graph(6)).has_value());
  EXPECT_FALSE(two_coloring(cycle_graph(5)).has_value());
  const auto c = *two_coloring(path_graph(4));
  for (Vertex v = 0; v + 1 < 4; ++v) EXPECT_NE(c[v], c[v + 1]);
}

TEST(Graph, EdgeEditing) {
  const auto c = cycle_graph(4);
  const auto id = *c.find_edge(0, 1);
  const auto cut = without_edge(c, id);
  EXPECT_EQ(cut.edge_count(), 3u);
  EXPECT_FALSE(cut.find_edge(0, 1).has_value());
  const auto back = with_edge(cut, {1, 0});
  EXPECT_EQ(back.edge_count(), 4u);
  EXPECT_THROW(with_edge(back, {0, 1}), InvalidArgument);
}

TEST(Graph, ClosedFormFamilies) {
  EXPECT_EQ(path_graph(10).edge_count(), 9u);
  EXPECT_EQ(cycle_graph(10).edge_count(), 10u);
  EXPECT_EQ(complete_graph(6).edge_count(), 15u);
  EXPECT_EQ(complete_graph(6).max_degree(), 5u);
}
