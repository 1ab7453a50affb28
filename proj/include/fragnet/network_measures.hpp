// network_measures.hpp
// Graph-level indicators for a MarketGraph. Strength weights feed the
// degree/clustering/modularity/assortativity/centrality family, distance
// weights feed the path-based family; natural log throughout.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "fragnet/market_graph.hpp"
#include "fragnet/shortest_paths.hpp"

namespace fragnet {

struct DegreeStats {
  std::size_t num_edges = 0;
  double edge_density = 0.0;
  double avg_degree = 0.0;
  double avg_weighted_degree = 0.0;
};

inline DegreeStats degree_stats(const MarketGraph& g) {
  require_connected(g, "degree_stats");
  const double n = static_cast<double>(g.vertex_count());
  const double m = static_cast<double>(g.edge_count());
  double mw = 0.0;
  for (const auto& e : g.edges) mw += e.strength;
  DegreeStats s;
  s.num_edges = g.edges.size();
  s.edge_density = 2.0 * m / (n * (n - 1.0));
  s.avg_degree = 2.0 * m / n;
  s.avg_weighted_degree = 2.0 * mw / n;
  return s;
}

struct PathStats {
  double avg_path_length = 0.0;
  double diameter = 0.0;
  double efficiency = 0.0;
  double grc = 0.0;
};

inline PathStats path_stats(const MarketGraph& g, const Eigen::MatrixXd& dist) {
  require_connected(g, "path_stats");
  const int n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("path_stats needs N >= 2");
  PathStats s;
  double sum_d = 0.0, sum_inv = 0.0;
  std::vector<double> reach(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = dist(i, j);
      sum_d += d;
      sum_inv += 1.0 / d;
      reach[static_cast<std::size_t>(i)] += 1.0 / d;
      s.diameter = std::max(s.diameter, d);
    }
    reach[static_cast<std::size_t>(i)] /= static_cast<double>(n - 1);
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  s.avg_path_length = sum_d / pairs;
  s.efficiency = sum_inv / pairs;
  double cmax = *std::max_element(reach.begin(), reach.end());
  double acc = 0.0;
  for (double c : reach) acc += cmax - c;
  s.grc = acc / static_cast<double>(n - 1);
  return s;
}

inline PathStats path_stats(const MarketGraph& g) {
  return path_stats(g, all_pairs_distances(g));
}

// Onnela weighted clustering with raw strengths; vertices of degree <= 1
// contribute zero.
inline double clustering_avg(const MarketGraph& g) {
  require_connected(g, "clustering_avg");
  const int n = g.vertex_count();
  Eigen::MatrixXd a = strength_adjacency(g);
  auto adj = neighbor_lists(g);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& nb = adj[static_cast<std::size_t>(i)];
    const std::size_t k = nb.size();
    if (k < 2) continue;
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) {
        double prod = a(i, nb[p]) * a(i, nb[q]) * a(nb[p], nb[q]);
        if (prod > 0.0) acc += std::cbrt(prod);
      }
    total += 2.0 * acc / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return total / static_cast<double>(n);
}

// Direct evaluation of Q on an assignment, strength weights:
//   Q = sum_c [ Win_c / (2 m_w) - (Stot_c / (2 m_w))^2 ]
// with Win_c counting ordered intra-community pairs.
inline double modularity(const MarketGraph& g, const std::vector<int>& assignment) {
  const int n = g.vertex_count();
  if (static_cast<int>(assignment.size()) != n)
    throw std::invalid_argument("assignment size does not match graph");
  int ncomm = 0;
  for (int c : assignment) ncomm = std::max(ncomm, c + 1);
  std::vector<double> win(static_cast<std::size_t>(ncomm), 0.0);
  std::vector<double> stot(static_cast<std::size_t>(ncomm), 0.0);
  double mw = 0.0;
  for (const auto& e : g.edges) {
    mw += e.strength;
    if (assignment[static_cast<std::size_t>(e.u)] ==
        assignment[static_cast<std::size_t>(e.v)])
      win[static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.u)])] +=
          2.0 * e.strength;
  }
  auto sdeg = strength_degrees(g);
  for (int i = 0; i < n; ++i)
    stot[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])] +=
        sdeg[static_cast<std::size_t>(i)];
  const double m2 = 2.0 * mw;
  if (m2 <= 0.0) return 0.0;
  double q = 0.0;
  for (int c = 0; c < ncomm; ++c)
    q += win[static_cast<std::size_t>(c)] / m2 -
         (stot[static_cast<std::size_t>(c)] / m2) * (stot[static_cast<std::size_t>(c)] / m2);
  return q;
}

struct CommunityPartition {
  std::vector<int> assignment;  // ids contiguous from 0
  double modularity = 0.0;
  int pass_count = 0;
};

namespace detail {

struct LouvainLevel {
  // One aggregation level. loop[i] counts ordered internal pairs of the
  // underlying original vertices, so strengths carry over exactly.
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> loop;
  std::vector<double> strength;
};

// One local-move phase, fixed vertex order, first-improvement policy.
// Returns the community of each node, ids renumbered by first appearance.
inline std::vector<int> louvain_local(const LouvainLevel& lvl, double m2) {
  const int n = static_cast<int>(lvl.adj.size());
  std::vector<int> comm(static_cast<std::size_t>(n));
  std::vector<double> stot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    comm[static_cast<std::size_t>(i)] = i;
    stot[static_cast<std::size_t>(i)] = lvl.strength[static_cast<std::size_t>(i)];
  }
  std::vector<double> k_to(static_cast<std::size_t>(n), 0.0);
  constexpr double gain_eps = 1e-12;

  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < n; ++i) {
      const int old_c = comm[static_cast<std::size_t>(i)];
      stot[static_cast<std::size_t>(old_c)] -= lvl.strength[static_cast<std::size_t>(i)];

      std::vector<int> touched;
      for (auto [j, w] : lvl.adj[static_cast<std::size_t>(i)]) {
        int c = comm[static_cast<std::size_t>(j)];
        if (k_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        k_to[static_cast<std::size_t>(c)] += w;
      }
      std::sort(touched.begin(), touched.end());

      auto score = [&](int c) {
        return k_to[static_cast<std::size_t>(c)] -
               stot[static_cast<std::size_t>(c)] *
                   lvl.strength[static_cast<std::size_t>(i)] / m2;
      };
      const double stay = score(old_c);
      int dest = old_c;
      for (int c : touched) {
        if (c == old_c) continue;
        if (score(c) > stay + gain_eps) {
          dest = c;
          break;
        }
      }
      for (int c : touched) k_to[static_cast<std::size_t>(c)] = 0.0;

      stot[static_cast<std::size_t>(dest)] += lvl.strength[static_cast<std::size_t>(i)];
      comm[static_cast<std::size_t>(i)] = dest;
      if (dest != old_c) moved = true;
    }
  }

  std::vector<int> renumber(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int& r = renumber[static_cast<std::size_t>(comm[static_cast<std::size_t>(i)])];
    if (r < 0) r = next++;
    comm[static_cast<std::size_t>(i)] = r;
  }
  return comm;
}

}  // namespace detail

// Deterministic Louvain: fixed sweep order, first-improvement moves, no
// randomized restarts. Modularity is re-evaluated on the original graph.
inline CommunityPartition louvain_partition(const MarketGraph& g) {
  require_connected(g, "louvain_partition");
  const int n = g.vertex_count();

  detail::LouvainLevel lvl;
  lvl.adj.resize(static_cast<std::size_t>(n));
  lvl.loop.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : g.edges) {
    lvl.adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.strength);
    lvl.adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.strength);
  }
  double m2 = 0.0;
  lvl.strength.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = lvl.loop[static_cast<std::size_t>(i)];
    for (auto [j, w] : lvl.adj[static_cast<std::size_t>(i)]) s += w;
    lvl.strength[static_cast<std::size_t>(i)] = s;
    m2 += s;
  }

  CommunityPartition part;
  part.assignment.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) part.assignment[static_cast<std::size_t>(i)] = i;

  if (m2 <= 0.0) {
    // Weightless graph: a single community, Q defined as 0.
    std::fill(part.assignment.begin(), part.assignment.end(), 0);
    part.pass_count = 0;
    part.modularity = 0.0;
    return part;
  }

  while (true) {
    std::vector<int> comm = detail::louvain_local(lvl, m2);
    ++part.pass_count;
    int ncomm = 0;
    for (int c : comm) ncomm = std::max(ncomm, c + 1);

    for (auto& a : part.assignment)
      a = comm[static_cast<std::size_t>(a)];

    if (ncomm == static_cast<int>(lvl.adj.size())) break;

    detail::LouvainLevel next;
    next.adj.resize(static_cast<std::size_t>(ncomm));
    next.loop.assign(static_cast<std::size_t>(ncomm), 0.0);
    next.strength.assign(static_cast<std::size_t>(ncomm), 0.0);
    std::vector<std::map<int, double>> agg(static_cast<std::size_t>(ncomm));
    for (std::size_t i = 0; i < lvl.adj.size(); ++i) {
      int ci = comm[i];
      next.loop[static_cast<std::size_t>(ci)] += lvl.loop[i];
      for (auto [j, w] : lvl.adj[i]) {
        int cj = comm[static_cast<std::size_t>(j)];
        if (ci == cj)
          next.loop[static_cast<std::size_t>(ci)] += w;  // ordered pairs: each direction once
        else
          agg[static_cast<std::size_t>(ci)][cj] += w;
      }
    }
    for (int c = 0; c < ncomm; ++c) {
      for (auto [d, w] : agg[static_cast<std::size_t>(c)])
        next.adj[static_cast<std::size_t>(c)].emplace_back(d, w);
      double s = next.loop[static_cast<std::size_t>(c)];
      for (auto [d, w] : next.adj[static_cast<std::size_t>(c)]) s += w;
      next.strength[static_cast<std::size_t>(c)] = s;
    }
    lvl = std::move(next);
  }

  part.modularity = modularity(g, part.assignment);
  return part;
}

struct AssortativityResult {
  double value = 0.0;
  bool degenerate = false;  // zero variance of endpoint degrees
};

inline AssortativityResult assortativity(const MarketGraph& g) {
  require_connected(g, "assortativity");
  auto deg = degrees(g);
  double mw = 0.0, s_prod = 0.0, s_sum = 0.0, s_sq = 0.0;
  for (const auto& e : g.edges) {
    double ki = deg[static_cast<std::size_t>(e.u)];
    double kj = deg[static_cast<std::size_t>(e.v)];
    mw += e.strength;
    s_prod += e.strength * ki * kj;
    s_sum += e.strength * (ki + kj);
    s_sq += e.strength * (ki * ki + kj * kj);
  }
  AssortativityResult r;
  if (mw <= 0.0) {
    r.degenerate = true;
    return r;
  }
  double mean = s_sum / (2.0 * mw);
  double num = s_prod / mw - mean * mean;
  double den = s_sq / (2.0 * mw) - mean * mean;
  if (std::abs(den) <= 1e-12 * std::max(1.0, s_sq / (2.0 * mw))) {
    r.degenerate = true;
    return r;
  }
  r.value = num / den;
  return r;
}

// Shannon entropy of the remaining-degree distribution, in nats.
inline double network_entropy(const MarketGraph& g) {
  require_connected(g, "network_entropy");
  const int n = g.vertex_count();
  auto deg = degrees(g);
  int maxk = *std::max_element(deg.begin(), deg.end());
  std::vector<double> p(static_cast<std::size_t>(maxk) + 1, 0.0);
  for (int d : deg) p[static_cast<std::size_t>(d)] += 1.0 / static_cast<double>(n);
  double mean_k = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
  double h = 0.0;
  for (int k = 0; k < maxk; ++k) {
    double q = (k + 1) * p[static_cast<std::size_t>(k) + 1] / mean_k;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

namespace detail {

// Branch and bound with greedy colouring bound (Tomita-style).
struct CliqueSearch {
  const std::vector<std::vector<char>>& adj;
  int best = 0;

  void expand(int depth, std::vector<int>& cand) {
    if (cand.empty()) {
      best = std::max(best, depth);
      return;
    }
    // Greedy colouring in list order; colour classes bound the clique size.
    std::vector<int> colour(cand.size());
    std::vector<std::vector<int>> classes;
    for (std::size_t idx = 0; idx < cand.size(); ++idx) {
      int v = cand[idx];
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool clash = false;
        for (int u : classes[c])
          if (adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(v);
      colour[idx] = static_cast<int>(c) + 1;
    }
    std::vector<std::pair<int, int>> order;  // (colour, vertex), colour ascending
    order.reserve(cand.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (int v : classes[c]) order.emplace_back(static_cast<int>(c) + 1, v);

    for (std::size_t idx = order.size(); idx-- > 0;) {
      auto [col, v] = order[idx];
      if (depth + col <= best) return;
      std::vector<int> next;
      for (std::size_t k = 0; k < idx; ++k)
        if (adj[static_cast<std::size_t>(order[k].second)][static_cast<std::size_t>(v)])
          next.push_back(order[k].second);
      if (depth + 1 + static_cast<int>(next.size()) > best) expand(depth + 1, next);
      best = std::max(best, depth + 1);
    }
  }
};

}  // namespace detail

// Exact maximum clique size.
inline int clique_number(const MarketGraph& g) {
  require_connected(g, "clique_number");
  const int n = g.vertex_count();
  std::vector<std::vector<char>> adj(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
    adj[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
  }
  auto deg = degrees(g);
  std::vector<int> verts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) verts[static_cast<std::size_t>(i)] = i;
  std::sort(verts.begin(), verts.end(), [&](int a, int b) {
    if (deg[static_cast<std::size_t>(a)] != deg[static_cast<std::size_t>(b)])
      return deg[static_cast<std::size_t>(a)] > deg[static_cast<std::size_t>(b)];
    return a < b;
  });
  detail::CliqueSearch search{adj, 0};
  search.expand(0, verts);
  return search.best;
}

struct CentralityVector {
  Eigen::VectorXd values;   // nonnegative, unit Euclidean norm
  double eigenvalue = 0.0;
};

inline CentralityVector eigenvector_centrality(const MarketGraph& g) {
  require_connected(g, "eigenvector_centrality");
  const int n = g.vertex_count();
  Eigen::MatrixXd a = strength_adjacency(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvector centrality failed to converge");
  CentralityVector cv;
  cv.eigenvalue = solver.eigenvalues()(n - 1);
  cv.values = solver.eigenvectors().col(n - 1);
  if (cv.values.sum() < 0.0) cv.values = -cv.values;
  for (int i = 0; i < n; ++i) cv.values(i) = std::max(cv.values(i), 0.0);
  cv.values.normalize();
  double residual = (a * cv.values - cv.eigenvalue * cv.values).cwiseAbs().maxCoeff();
  if (residual > 1e-8)
    throw std::runtime_error("eigenvector centrality residual too large");
  return cv;
}

// The full per-graph scalar block in indicator-column order.
struct GraphScalarReport {
  std::size_t num_edges = 0;
  double edge_density = 0.0;
  double avg_degree = 0.0;
  double avg_weighted_degree = 0.0;
  double avg_path_length = 0.0;
  double diameter = 0.0;
  double efficiency = 0.0;
  double avg_clustering = 0.0;
  double modularity = 0.0;
  double assortativity = 0.0;
  bool assortativity_degenerate = false;
  double network_entropy = 0.0;
  double grc = 0.0;
  int clique_number = 0;
};

inline GraphScalarReport graph_scalar_report(const MarketGraph& g,
                                             const Eigen::MatrixXd& dist,
                                             const CommunityPartition& partition) {
  GraphScalarReport r;
  auto ds = degree_stats(g);
  r.num_edges = ds.num_edges;
  r.edge_density = ds.edge_density;
  r.avg_degree = ds.avg_degree;
  r.avg_weighted_degree = ds.avg_weighted_degree;
  auto ps = path_stats(g, dist);
  r.avg_path_length = ps.avg_path_length;
  r.diameter = ps.diameter;
  r.efficiency = ps.efficiency;
  r.grc = ps.grc;
  r.avg_clustering = clustering_avg(g);
  r.modularity = partition.modularity;
  auto as = assortativity(g);
  r.assortativity = as.value;
  r.assortativity_degenerate = as.degenerate;
  r.network_entropy = network_entropy(g);
  r.clique_number = clique_number(g);
  return r;
}

}  // namespace fragnet
