// network_build.hpp
// The three filtered networks built from one correlation/distance frame:
//   MST        — Prim on the distance matrix;
//   THRESHOLD  — MST plus every pair with correlation >= theta (signed);
//   PMFG       — greedy maximal planar graph in decreasing correlation order.
// Ties are always broken by lexicographic vertex-pair order after the
// primary key so repeated runs produce identical edge sets.

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fragnet/correlation.hpp"
#include "fragnet/market_graph.hpp"
#include "fragnet/planarity.hpp"

namespace fragnet {

namespace detail {

inline void check_frames(const DistanceFrame& dist, const CorrelationFrame& corr) {
  if (dist.matrix.rows() != corr.matrix.rows() ||
      dist.end_date != corr.end_date || dist.tau != corr.tau)
    throw std::invalid_argument("distance frame does not match correlation frame");
}

inline GraphEdge make_edge(int u, int v, const CorrelationFrame& corr,
                           const DistanceFrame& dist) {
  GraphEdge e;
  e.u = std::min(u, v);
  e.v = std::max(u, v);
  e.strength = std::abs(corr.matrix(e.u, e.v));
  e.distance = dist.matrix(e.u, e.v);
  return e;
}

}  // namespace detail

inline MarketGraph build_mst(const DistanceFrame& dist,
                             const CorrelationFrame& corr,
                             const std::vector<IndexMeta>& meta) {
  detail::check_frames(dist, corr);
  const int n = static_cast<int>(dist.matrix.rows());
  if (n < 2) throw std::invalid_argument("MST needs N >= 2");
  if (static_cast<int>(meta.size()) != n)
    throw std::invalid_argument("metadata size does not match frame");

  MarketGraph g;
  g.vertices = meta;
  g.kind = GraphKind::MST;
  g.frame = FrameRef{corr.end_date, corr.tau, std::nullopt};

  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<double> best(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
  std::vector<int> best_from(static_cast<std::size_t>(n), -1);
  in_tree[0] = 1;
  for (int w = 1; w < n; ++w) {
    best[static_cast<std::size_t>(w)] = dist.matrix(0, w);
    best_from[static_cast<std::size_t>(w)] = 0;
  }
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int w = 0; w < n; ++w) {
      if (in_tree[static_cast<std::size_t>(w)]) continue;
      if (pick < 0) {
        pick = w;
        continue;
      }
      double dw = best[static_cast<std::size_t>(w)];
      double dp = best[static_cast<std::size_t>(pick)];
      if (dw < dp) {
        pick = w;
      } else if (dw == dp) {
        // Equal-distance candidates: prefer the lexicographically smaller
        // (min endpoint, max endpoint) pair.
        auto key = [&](int x) {
          int f = best_from[static_cast<std::size_t>(x)];
          return std::make_pair(std::min(f, x), std::max(f, x));
        };
        if (key(w) < key(pick)) pick = w;
      }
    }
    g.edges.push_back(detail::make_edge(best_from[static_cast<std::size_t>(pick)],
                                        pick, corr, dist));
    in_tree[static_cast<std::size_t>(pick)] = 1;
    for (int w = 0; w < n; ++w) {
      if (in_tree[static_cast<std::size_t>(w)]) continue;
      double d = dist.matrix(pick, w);
      double cur = best[static_cast<std::size_t>(w)];
      if (d < cur) {
        best[static_cast<std::size_t>(w)] = d;
        best_from[static_cast<std::size_t>(w)] = pick;
      } else if (d == cur) {
        int f = best_from[static_cast<std::size_t>(w)];
        auto cur_key = std::make_pair(std::min(f, w), std::max(f, w));
        auto new_key = std::make_pair(std::min(pick, w), std::max(pick, w));
        if (new_key < cur_key) best_from[static_cast<std::size_t>(w)] = pick;
      }
    }
  }
  g.sort_edges();
  return g;
}

inline MarketGraph build_threshold_network(const MarketGraph& mst,
                                           const CorrelationFrame& corr,
                                           double theta = 0.65) {
  if (!(theta > -1.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in (-1, 1]");
  if (mst.kind != GraphKind::MST)
    throw std::invalid_argument("threshold network must start from an MST");
  const int n = static_cast<int>(corr.matrix.rows());
  if (mst.vertex_count() != n || mst.frame.end_date != corr.end_date)
    throw std::invalid_argument("MST does not match correlation frame");

  MarketGraph g;
  g.vertices = mst.vertices;
  g.kind = GraphKind::Threshold;
  g.frame = FrameRef{corr.end_date, corr.tau, theta};

  std::vector<std::vector<char>> have(static_cast<std::size_t>(n),
                                      std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const auto& e : mst.edges) {
    g.edges.push_back(e);
    have[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (have[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
      if (corr.matrix(i, j) >= theta) {
        GraphEdge e;
        e.u = i;
        e.v = j;
        e.strength = std::abs(corr.matrix(i, j));
        e.distance = std::sqrt(2.0 * (1.0 - corr.matrix(i, j)));
        g.edges.push_back(e);
      }
    }
  g.sort_edges();
  return g;
}

inline MarketGraph build_pmfg(const CorrelationFrame& corr,
                              const DistanceFrame& dist,
                              const std::vector<IndexMeta>& meta) {
  detail::check_frames(dist, corr);
  const int n = static_cast<int>(corr.matrix.rows());
  if (n < 3) throw std::invalid_argument("PMFG needs N >= 3");
  if (static_cast<int>(meta.size()) != n)
    throw std::invalid_argument("metadata size does not match frame");

  struct Candidate {
    double c;
    int u, v;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cands.push_back({corr.matrix(i, j), i, j});
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.c != b.c) return a.c > b.c;
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  // Union-find: an edge joining two components never breaks planarity,
  // so only within-component candidates need the full test.
  std::vector<int> root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) root[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x) {
      root[static_cast<std::size_t>(x)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
      x = root[static_cast<std::size_t>(x)];
    }
    return x;
  };

  const std::size_t target = static_cast<std::size_t>(3 * n - 6);
  std::vector<std::pair<int, int>> accepted;
  MarketGraph g;
  g.vertices = meta;
  g.kind = GraphKind::PMFG;
  g.frame = FrameRef{corr.end_date, corr.tau, std::nullopt};

  for (const auto& cand : cands) {
    if (accepted.size() == target) break;
    int ru = find(cand.u), rv = find(cand.v);
    bool ok;
    if (ru != rv) {
      ok = true;
    } else {
      accepted.emplace_back(cand.u, cand.v);
      ok = is_planar(n, accepted);
      accepted.pop_back();
    }
    if (ok) {
      accepted.emplace_back(cand.u, cand.v);
      if (ru != rv) root[static_cast<std::size_t>(ru)] = rv;
      g.edges.push_back(detail::make_edge(cand.u, cand.v, corr, dist));
    }
  }
  g.sort_edges();
  return g;
}

}  // namespace fragnet
