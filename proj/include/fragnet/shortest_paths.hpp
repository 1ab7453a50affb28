// shortest_paths.hpp
// All-pairs weighted shortest paths over edge distances, Dijkstra per source.

#pragma once

#include <Eigen/Dense>
#include <limits>
#include <queue>
#include <vector>

#include "fragnet/market_graph.hpp"

namespace fragnet {

inline Eigen::MatrixXd all_pairs_distances(const MarketGraph& g) {
  const int n = g.vertex_count();
  auto adj = distance_adjacency(g);
  Eigen::MatrixXd dist =
      Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());

  using Item = std::pair<double, int>;
  for (int s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist(s, s) = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist(s, v)) continue;
      for (auto [w, len] : adj[static_cast<std::size_t>(v)]) {
        double nd = d + len;
        if (nd < dist(s, w)) {
          dist(s, w) = nd;
          heap.emplace(nd, w);
        }
      }
    }
  }
  return dist;
}

}  // namespace fragnet
