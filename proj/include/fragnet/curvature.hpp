// curvature.hpp
// The four edge-based discrete Ricci curvatures, their node aggregates and
// frame averages.
//
//   OR(e) = 1 - W1(m_u, m_v) / d(u,v)   neighbour measures, distance weights
//   FR(e) = combinatorial Forman form    unit vertex weights, distance weights
//   MR(e) = (sqrt(3)/2) * #triangles(e)  unweighted
//   HR(e) = sum over simple detours pi   unweighted, |pi| <= max_path_len
//           of sqrt(|pi| - 1)
//
// The OR neighbour measure is uniform over the neighbours with no mass on
// the centre vertex, and both the ground metric and the denominator d(u,v)
// are weighted shortest-path distances.

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fragnet/market_graph.hpp"
#include "fragnet/shortest_paths.hpp"
#include "fragnet/wasserstein.hpp"

namespace fragnet {

// Floor applied wherever a zero ultrametric distance (a perfectly
// correlated pair) would otherwise divide by zero.
inline constexpr double kZeroDistanceFloor = 1e-9;

inline std::vector<double> ollivier_ricci_edges(const MarketGraph& g,
                                                const Eigen::MatrixXd& dist) {
  require_connected(g, "ollivier_ricci_edges");
  auto adj = neighbor_lists(g);
  std::vector<double> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const auto& nu_u = adj[static_cast<std::size_t>(e.u)];
    const auto& nu_v = adj[static_cast<std::size_t>(e.v)];
    std::vector<std::pair<int, double>> mu, nu;
    mu.reserve(nu_u.size());
    nu.reserve(nu_v.size());
    for (int w : nu_u) mu.emplace_back(w, 1.0 / static_cast<double>(nu_u.size()));
    for (int w : nu_v) nu.emplace_back(w, 1.0 / static_cast<double>(nu_v.size()));
    double w1 = wasserstein_w1(mu, nu, dist);
    double d = std::max(dist(e.u, e.v), kZeroDistanceFloor);
    out.push_back(1.0 - w1 / d);
  }
  return out;
}

inline std::vector<double> ollivier_ricci_edges(const MarketGraph& g) {
  return ollivier_ricci_edges(g, all_pairs_distances(g));
}

struct FormanResult {
  std::vector<double> values;
  int floored_edges = 0;  // edges whose distance hit the zero floor
};

inline FormanResult forman_ricci_edges(const MarketGraph& g) {
  require_connected(g, "forman_ricci_edges");
  const int n = g.vertex_count();
  // Incident edge distances per vertex, for the neighbour sums.
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.distance);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.distance);
  }
  FormanResult res;
  res.values.reserve(g.edges.size());
  auto floored = [&](double w) {
    if (w < kZeroDistanceFloor) {
      ++res.floored_edges;
      return kZeroDistanceFloor;
    }
    return w;
  };
  for (const auto& e : g.edges) {
    double we = floored(e.distance);
    // Unit vertex weights: F(e) = 2 - sum over parallel edges at either end
    // of sqrt(w_e / w_e').
    double spread = 0.0;
    for (auto [w, dw] : adj[static_cast<std::size_t>(e.u)])
      if (w != e.v) spread += std::sqrt(we / std::max(dw, kZeroDistanceFloor));
    for (auto [w, dw] : adj[static_cast<std::size_t>(e.v)])
      if (w != e.u) spread += std::sqrt(we / std::max(dw, kZeroDistanceFloor));
    res.values.push_back(2.0 - spread);
  }
  return res;
}

inline std::vector<double> menger_ricci_edges(const MarketGraph& g) {
  require_connected(g, "menger_ricci_edges");
  const int n = g.vertex_count();
  std::vector<std::vector<char>> have(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const auto& e : g.edges) {
    have[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
    have[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
  }
  auto adj = neighbor_lists(g);
  const double unit_triangle = std::numbers::sqrt3 / 2.0;
  std::vector<double> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    int triangles = 0;
    for (int w : adj[static_cast<std::size_t>(e.u)])
      if (w != e.v && have[static_cast<std::size_t>(w)][static_cast<std::size_t>(e.v)])
        ++triangles;
    out.push_back(unit_triangle * triangles);
  }
  return out;
}

namespace detail {

// Sums sqrt(len - 1) over simple u..v paths of 2..max_len edges that avoid
// the direct edge. Depth-first over path prefixes; the final hop is closed
// in bulk by counting unvisited common neighbours of the current vertex and
// v with a bitmask intersection, which removes the deepest enumeration
// level. A simple path between adjacent vertices cannot pass through either
// endpoint, so blocking v as an intermediate keeps paths simple.
struct HaantjesCounter {
  const std::vector<std::vector<int>>& adj;
  const std::vector<std::uint64_t>& bits;  // adjacency rows, n x words
  int words;
  int target;
  std::size_t max_len;
  const std::vector<double>& sqrt_table;
  std::vector<std::uint64_t>& visited;
  double acc = 0.0;

  bool adjacent_to_target(int x) const {
    return (bits[static_cast<std::size_t>(x) * static_cast<std::size_t>(words) +
                 static_cast<std::size_t>(target >> 6)] >>
            (target & 63)) &
           1u;
  }

  void walk(int cur, std::size_t len) {
    const std::uint64_t* crow =
        &bits[static_cast<std::size_t>(cur) * static_cast<std::size_t>(words)];
    if (len >= 1 && adjacent_to_target(cur)) acc += sqrt_table[len];
    if (len + 2 > max_len) return;
    const std::uint64_t* vrow =
        &bits[static_cast<std::size_t>(target) * static_cast<std::size_t>(words)];
    if (len + 2 == max_len) {
      int closable = 0;
      for (int w = 0; w < words; ++w)
        closable += std::popcount(crow[w] & vrow[w] &
                                  ~visited[static_cast<std::size_t>(w)]);
      acc += sqrt_table[len + 1] * closable;
      return;
    }
    for (int x : adj[static_cast<std::size_t>(cur)]) {
      std::uint64_t& word = visited[static_cast<std::size_t>(x >> 6)];
      const std::uint64_t bit = 1ull << (x & 63);
      if (word & bit) continue;  // covers x == target as well
      word |= bit;
      walk(x, len + 1);
      word &= ~bit;
    }
  }
};

}  // namespace detail

inline std::vector<double> haantjes_ricci_edges(const MarketGraph& g,
                                                std::size_t max_path_len = 5) {
  require_connected(g, "haantjes_ricci_edges");
  if (max_path_len < 2)
    throw std::invalid_argument("haantjes_ricci_edges needs max_path_len >= 2");
  const int n = g.vertex_count();
  const int words = (n + 63) / 64;
  auto adj = neighbor_lists(g);
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(n) *
                                      static_cast<std::size_t>(words),
                                  0);
  for (const auto& e : g.edges) {
    bits[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(words) +
         static_cast<std::size_t>(e.v >> 6)] |= 1ull << (e.v & 63);
    bits[static_cast<std::size_t>(e.v) * static_cast<std::size_t>(words) +
         static_cast<std::size_t>(e.u >> 6)] |= 1ull << (e.u & 63);
  }
  std::vector<double> sqrt_table(max_path_len + 1);
  for (std::size_t k = 0; k < sqrt_table.size(); ++k)
    sqrt_table[k] = std::sqrt(static_cast<double>(k));

  std::vector<std::uint64_t> visited(static_cast<std::size_t>(words), 0);
  std::vector<double> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    std::fill(visited.begin(), visited.end(), 0);
    visited[static_cast<std::size_t>(e.u >> 6)] |= 1ull << (e.u & 63);
    visited[static_cast<std::size_t>(e.v >> 6)] |= 1ull << (e.v & 63);
    detail::HaantjesCounter counter{adj,          bits,       words, e.v,
                                    max_path_len, sqrt_table, visited};
    counter.walk(e.u, 0);
    out.push_back(counter.acc);
  }
  return out;
}

struct NodeCurvatures {
  std::vector<double> or_node;
  std::vector<double> fr_node;
};

inline NodeCurvatures node_curvature_aggregate(const MarketGraph& g,
                                               const std::vector<double>& or_edges,
                                               const std::vector<double>& fr_edges) {
  if (or_edges.size() != g.edges.size() || fr_edges.size() != g.edges.size())
    throw std::invalid_argument("edge curvature vectors do not match edge count");
  NodeCurvatures nc;
  nc.or_node.assign(static_cast<std::size_t>(g.vertex_count()), 0.0);
  nc.fr_node.assign(static_cast<std::size_t>(g.vertex_count()), 0.0);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    nc.or_node[static_cast<std::size_t>(e.u)] += or_edges[k];
    nc.or_node[static_cast<std::size_t>(e.v)] += or_edges[k];
    nc.fr_node[static_cast<std::size_t>(e.u)] += fr_edges[k];
    nc.fr_node[static_cast<std::size_t>(e.v)] += fr_edges[k];
  }
  return nc;
}

struct CurvatureAverages {
  double avg_or = 0.0;
  double avg_fr = 0.0;
  double avg_mr = 0.0;
  double avg_hr = 0.0;
};

inline double mean_of(const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("curvature average of an empty edge set");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

inline CurvatureAverages curvature_frame_averages(const std::vector<double>& or_edges,
                                                  const std::vector<double>& fr_edges,
                                                  const std::vector<double>& mr_edges,
                                                  const std::vector<double>& hr_edges) {
  return CurvatureAverages{mean_of(or_edges), mean_of(fr_edges), mean_of(mr_edges),
                           mean_of(hr_edges)};
}

// Everything the pipeline needs per graph in one pass.
struct EdgeCurvatures {
  std::vector<double> ollivier;
  std::vector<double> forman;
  std::vector<double> menger;
  std::vector<double> haantjes;
  int forman_floored = 0;
};

inline EdgeCurvatures compute_edge_curvatures(const MarketGraph& g,
                                              const Eigen::MatrixXd& dist,
                                              std::size_t hr_max_path = 5) {
  EdgeCurvatures c;
  c.ollivier = ollivier_ricci_edges(g, dist);
  auto fr = forman_ricci_edges(g);
  c.forman = std::move(fr.values);
  c.forman_floored = fr.floored_edges;
  c.menger = menger_ricci_edges(g);
  c.haantjes = haantjes_ricci_edges(g, hr_max_path);
  return c;
}

}  // namespace fragnet
