// market_graph.hpp
// The vertex-labelled undirected graph shared by every network construction.
// Each edge carries both natural weights: strength |C_ij| in [0,1] and
// ultrametric distance D_ij in [0,2]. Edges are kept sorted by (u,v) with
// u < v so that identical inputs always serialize identically.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fragnet/date.hpp"
#include "fragnet/panel.hpp"

namespace fragnet {

enum class GraphKind { MST, Threshold, PMFG };

inline const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::MST: return "MST";
    case GraphKind::Threshold: return "THRESHOLD";
    case GraphKind::PMFG: return "PMFG";
  }
  return "?";
}

struct GraphEdge {
  int u = 0;
  int v = 0;  // u < v
  double strength = 0.0;
  double distance = 0.0;
};

struct FrameRef {
  Date end_date;
  std::size_t tau = 0;
  std::optional<double> theta;
};

struct MarketGraph {
  std::vector<IndexMeta> vertices;
  std::vector<GraphEdge> edges;
  GraphKind kind = GraphKind::MST;
  FrameRef frame;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  void sort_edges() {
    for (auto& e : edges)
      if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
  }
};

// Neighbour lists in ascending vertex order.
inline std::vector<std::vector<int>> neighbor_lists(const MarketGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

// (neighbour, edge distance) lists in ascending vertex order.
inline std::vector<std::vector<std::pair<int, double>>> distance_adjacency(
    const MarketGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<std::size_t>(g.vertex_count()));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.distance);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.distance);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

inline Eigen::MatrixXd strength_adjacency(const MarketGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges) {
    a(e.u, e.v) = e.strength;
    a(e.v, e.u) = e.strength;
  }
  return a;
}

inline std::vector<int> degrees(const MarketGraph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& e : g.edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

inline std::vector<double> strength_degrees(const MarketGraph& g) {
  std::vector<double> s(static_cast<std::size_t>(g.vertex_count()), 0.0);
  for (const auto& e : g.edges) {
    s[static_cast<std::size_t>(e.u)] += e.strength;
    s[static_cast<std::size_t>(e.v)] += e.strength;
  }
  return s;
}

inline bool is_connected(const MarketGraph& g) {
  const int n = g.vertex_count();
  if (n == 0) return false;
  auto adj = neighbor_lists(g);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

inline void require_connected(const MarketGraph& g, const char* where) {
  if (!is_connected(g))
    throw std::invalid_argument(std::string(where) +
                                " requires a connected graph");
}

}  // namespace fragnet
