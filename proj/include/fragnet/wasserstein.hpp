// wasserstein.hpp
// Exact W1 between two discrete distributions on graph vertices, with a
// precomputed all-pairs shortest-path ground metric. The transportation LP
// is solved by successive shortest augmenting paths over the complete
// bipartite support with Johnson potentials, so every Dijkstra runs on
// nonnegative reduced costs and the final plan satisfies complementary
// slackness, i.e. it is optimal.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fragnet {

// Full solution: the optimal plan and the dual potentials alongside the
// cost. The potentials are feasible for the dual LP and tight on every
// flow-carrying arc, so they certify optimality of the returned plan.
struct W1Solution {
  double cost = 0.0;
  Eigen::MatrixXd plan;             // |mu| x |nu|
  std::vector<double> mu_potential;
  std::vector<double> nu_potential;
};

inline W1Solution wasserstein_w1_detailed(
    const std::vector<std::pair<int, double>>& mu,
    const std::vector<std::pair<int, double>>& nu, const Eigen::MatrixXd& ground) {
  const int a = static_cast<int>(mu.size());
  const int b = static_cast<int>(nu.size());
  if (a == 0 || b == 0)
    throw std::invalid_argument("wasserstein_w1 needs nonempty supports");
  double mass_mu = 0.0, mass_nu = 0.0;
  for (auto [v, m] : mu) {
    if (m < 0.0) throw std::invalid_argument("negative mass in mu");
    if (v < 0 || v >= ground.rows())
      throw std::invalid_argument("mu support outside vertex set");
    mass_mu += m;
  }
  for (auto [v, m] : nu) {
    if (m < 0.0) throw std::invalid_argument("negative mass in nu");
    if (v < 0 || v >= ground.rows())
      throw std::invalid_argument("nu support outside vertex set");
    mass_nu += m;
  }
  if (std::abs(mass_mu - 1.0) > 1e-12 || std::abs(mass_nu - 1.0) > 1e-12)
    throw std::invalid_argument("unbalanced masses in wasserstein_w1");

  Eigen::MatrixXd cost(a, b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      double c = ground(mu[static_cast<std::size_t>(i)].first,
                        nu[static_cast<std::size_t>(j)].first);
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("ground metric must be finite and nonnegative");
      cost(i, j) = c;
    }

  constexpr double mass_tol = 1e-15;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> rem_s(static_cast<std::size_t>(a)), rem_d(static_cast<std::size_t>(b));
  for (int i = 0; i < a; ++i) rem_s[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)].second;
  for (int j = 0; j < b; ++j) rem_d[static_cast<std::size_t>(j)] = nu[static_cast<std::size_t>(j)].second;

  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(a, b);
  std::vector<double> pot_a(static_cast<std::size_t>(a), 0.0);
  std::vector<double> pot_b(static_cast<std::size_t>(b), 0.0);

  // Warm start: mass shared by both supports can sit still on the zero-cost
  // arc between the two copies of the same vertex. Those arcs are tight at
  // zero potentials, so the preloaded flow satisfies complementary
  // slackness and the augmenting loop below finishes the residual exactly.
  {
    std::vector<int> col_of;
    for (int j = 0; j < b; ++j) {
      int v = nu[static_cast<std::size_t>(j)].first;
      if (v >= static_cast<int>(col_of.size())) col_of.resize(static_cast<std::size_t>(v) + 1, -1);
      col_of[static_cast<std::size_t>(v)] = j;
    }
    for (int i = 0; i < a; ++i) {
      int v = mu[static_cast<std::size_t>(i)].first;
      if (v >= static_cast<int>(col_of.size()) || col_of[static_cast<std::size_t>(v)] < 0)
        continue;
      int j = col_of[static_cast<std::size_t>(v)];
      if (cost(i, j) != 0.0) continue;
      double m = std::min(rem_s[static_cast<std::size_t>(i)], rem_d[static_cast<std::size_t>(j)]);
      flow(i, j) = m;
      rem_s[static_cast<std::size_t>(i)] -= m;
      rem_d[static_cast<std::size_t>(j)] -= m;
    }
  }

  const int max_rounds = 4 * a * b + 16;
  int rounds = 0;
  while (true) {
    // The two mass totals may differ by the validation slack, so stop as
    // soon as either side is exhausted; the residue is below audit level.
    double supply_left = 0.0, demand_left = 0.0;
    for (double s : rem_s) supply_left += s;
    for (double d : rem_d) demand_left += d;
    if (supply_left <= mass_tol * a || demand_left <= mass_tol * b) break;
    if (++rounds > max_rounds)
      throw std::runtime_error("wasserstein_w1 failed to converge (internal error)");

    // Multi-source Dijkstra over reduced costs, dense scan (supports are small).
    std::vector<double> dist_a(static_cast<std::size_t>(a), inf);
    std::vector<double> dist_b(static_cast<std::size_t>(b), inf);
    std::vector<int> prev_b(static_cast<std::size_t>(b), -1);  // A node feeding j
    std::vector<int> prev_a(static_cast<std::size_t>(a), -1);  // B node feeding i
    std::vector<char> done_a(static_cast<std::size_t>(a), 0);
    std::vector<char> done_b(static_cast<std::size_t>(b), 0);
    for (int i = 0; i < a; ++i)
      if (rem_s[static_cast<std::size_t>(i)] > mass_tol) dist_a[static_cast<std::size_t>(i)] = 0.0;

    while (true) {
      // Pick the unfinished node with the smallest tentative distance.
      double best = inf;
      int side = -1, node = -1;
      for (int i = 0; i < a; ++i)
        if (!done_a[static_cast<std::size_t>(i)] && dist_a[static_cast<std::size_t>(i)] < best) {
          best = dist_a[static_cast<std::size_t>(i)];
          side = 0;
          node = i;
        }
      for (int j = 0; j < b; ++j)
        if (!done_b[static_cast<std::size_t>(j)] && dist_b[static_cast<std::size_t>(j)] < best) {
          best = dist_b[static_cast<std::size_t>(j)];
          side = 1;
          node = j;
        }
      if (side < 0) break;
      if (side == 0) {
        done_a[static_cast<std::size_t>(node)] = 1;
        for (int j = 0; j < b; ++j) {
          if (done_b[static_cast<std::size_t>(j)]) continue;
          double rc = cost(node, j) - pot_a[static_cast<std::size_t>(node)] -
                      pot_b[static_cast<std::size_t>(j)];
          rc = std::max(rc, 0.0);
          if (best + rc < dist_b[static_cast<std::size_t>(j)]) {
            dist_b[static_cast<std::size_t>(j)] = best + rc;
            prev_b[static_cast<std::size_t>(j)] = node;
          }
        }
      } else {
        done_b[static_cast<std::size_t>(node)] = 1;
        for (int i = 0; i < a; ++i) {
          if (done_a[static_cast<std::size_t>(i)]) continue;
          if (flow(i, node) <= mass_tol) continue;  // backward arc needs flow
          // Complementary slackness keeps used arcs tight, so the backward
          // reduced cost is zero.
          if (best < dist_a[static_cast<std::size_t>(i)]) {
            dist_a[static_cast<std::size_t>(i)] = best;
            prev_a[static_cast<std::size_t>(i)] = node;
          }
        }
      }
    }

    // Closest demand node with remaining capacity.
    int target = -1;
    double target_dist = inf;
    for (int j = 0; j < b; ++j)
      if (rem_d[static_cast<std::size_t>(j)] > mass_tol &&
          dist_b[static_cast<std::size_t>(j)] < target_dist) {
        target_dist = dist_b[static_cast<std::size_t>(j)];
        target = j;
      }
    if (target < 0)
      throw std::runtime_error("wasserstein_w1 infeasible (internal error)");

    for (int i = 0; i < a; ++i)
      pot_a[static_cast<std::size_t>(i)] -=
          std::min(dist_a[static_cast<std::size_t>(i)], target_dist);
    for (int j = 0; j < b; ++j)
      pot_b[static_cast<std::size_t>(j)] +=
          std::min(dist_b[static_cast<std::size_t>(j)], target_dist);

    // Walk the augmenting path back to a source, find the bottleneck.
    double delta = rem_d[static_cast<std::size_t>(target)];
    {
      int j = target;
      while (true) {
        int i = prev_b[static_cast<std::size_t>(j)];
        int jprev = prev_a[static_cast<std::size_t>(i)];
        if (jprev < 0) {
          delta = std::min(delta, rem_s[static_cast<std::size_t>(i)]);
          break;
        }
        delta = std::min(delta, flow(i, jprev));
        j = jprev;
      }
    }
    {
      int j = target;
      while (true) {
        int i = prev_b[static_cast<std::size_t>(j)];
        flow(i, j) += delta;
        int jprev = prev_a[static_cast<std::size_t>(i)];
        if (jprev < 0) {
          rem_s[static_cast<std::size_t>(i)] -= delta;
          break;
        }
        flow(i, jprev) -= delta;
        j = jprev;
      }
      rem_d[static_cast<std::size_t>(target)] -= delta;
    }
  }

  // Feasibility audit; a violation here means the solver is broken.
  for (int i = 0; i < a; ++i) {
    double row = flow.row(i).sum();
    if (std::abs(row - mu[static_cast<std::size_t>(i)].second) > 1e-9)
      throw std::runtime_error("wasserstein_w1 plan violates row marginal");
  }
  for (int j = 0; j < b; ++j) {
    double col = flow.col(j).sum();
    if (std::abs(col - nu[static_cast<std::size_t>(j)].second) > 1e-9)
      throw std::runtime_error("wasserstein_w1 plan violates column marginal");
  }

  W1Solution solution;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) solution.cost += flow(i, j) * cost(i, j);
  solution.plan = std::move(flow);
  solution.mu_potential = std::move(pot_a);
  solution.nu_potential = std::move(pot_b);
  return solution;
}

inline double wasserstein_w1(const std::vector<std::pair<int, double>>& mu,
                             const std::vector<std::pair<int, double>>& nu,
                             const Eigen::MatrixXd& ground) {
  return wasserstein_w1_detailed(mu, nu, ground).cost;
}

}  // namespace fragnet
