// generators.hpp — deterministic fixtures and random-input generators
// shared by the unit and acceptance suites.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "fragnet/correlation.hpp"
#include "fragnet/market_graph.hpp"
#include "fragnet/panel.hpp"

namespace testsupport {

inline std::vector<fragnet::IndexMeta> make_meta(int n) {
  static const char* regions[5] = {"NA", "SA", "AP", "EME", "AME"};
  static const char* region_names[5] = {"North America", "South America",
                                        "Asia Pacific", "Europe Middle East",
                                        "Africa/Middle East"};
  std::vector<fragnet::IndexMeta> meta;
  meta.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    fragnet::IndexMeta m;
    char code[16];
    std::snprintf(code, sizeof(code), "IDX%02d", i);
    m.index_code = code;
    std::snprintf(code, sizeof(code), "C%02d", i);
    m.country_code = code;
    m.country = "Country " + std::to_string(i);
    m.region_code = regions[i % 5];
    m.region = region_names[i % 5];
    meta.push_back(std::move(m));
  }
  return meta;
}

inline fragnet::Date next_day(fragnet::Date d) {
  if (++d.day > fragnet::Date::days_in_month(d.year, d.month)) {
    d.day = 1;
    if (++d.month > 12) {
      d.month = 1;
      ++d.year;
    }
  }
  return d;
}

inline std::vector<fragnet::Date> date_run(fragnet::Date start, int count) {
  std::vector<fragnet::Date> out;
  out.reserve(static_cast<std::size_t>(count));
  fragnet::Date d = start;
  for (int i = 0; i < count; ++i) {
    out.push_back(d);
    d = next_day(d);
  }
  return out;
}

inline fragnet::ReturnPanel return_panel_from(const Eigen::MatrixXd& returns) {
  fragnet::ReturnPanel rp;
  rp.returns = returns;
  rp.meta = make_meta(static_cast<int>(returns.rows()));
  rp.dates = date_run({2005, 1, 2}, static_cast<int>(returns.cols()));
  return rp;
}

inline fragnet::ReturnPanel random_return_panel(int n, int days,
                                                std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd r(n, days);
  for (int j = 0; j < n; ++j)
    for (int t = 0; t < days; ++t) r(j, t) = 0.01 * z(rng);
  return return_panel_from(r);
}

inline fragnet::CorrelationFrame random_corr_frame(int n, std::mt19937_64& rng,
                                                   int tau = 40) {
  auto rp = random_return_panel(n, tau, rng);
  fragnet::WindowSpec w{0, static_cast<std::size_t>(tau), rp.dates.back()};
  return fragnet::correlation_frame(rp, w);
}

inline fragnet::CorrelationFrame frame_from_matrix(const Eigen::MatrixXd& c) {
  fragnet::CorrelationFrame f;
  f.end_date = {2010, 6, 30};
  f.tau = 40;
  f.matrix = c;
  return f;
}

inline fragnet::MarketGraph make_graph(
    int n, const std::vector<std::tuple<int, int, double, double>>& edges) {
  fragnet::MarketGraph g;
  g.vertices = make_meta(n);
  g.kind = fragnet::GraphKind::Threshold;
  g.frame = fragnet::FrameRef{{2010, 6, 30}, 40, 0.65};
  for (auto [u, v, s, d] : edges) g.edges.push_back({u, v, s, d});
  g.sort_edges();
  return g;
}

// Unit strengths and unit distances.
inline fragnet::MarketGraph unit_graph(int n,
                                       const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::tuple<int, int, double, double>> full;
  full.reserve(edges.size());
  for (auto [u, v] : edges) full.emplace_back(u, v, 1.0, 1.0);
  return make_graph(n, full);
}

inline std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

// Random connected graph: a random spanning tree plus Bernoulli extras.
inline std::vector<std::pair<int, int>> random_connected_edges(int n, double p,
                                                               std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::vector<char>> have(static_cast<std::size_t>(n),
                                      std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    int u = pick(rng);
    edges.emplace_back(u, v);
    have[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!have[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
          coin(rng) < p)
        edges.emplace_back(i, j);
  return edges;
}

inline fragnet::MarketGraph random_unit_graph(int n, double p, std::mt19937_64& rng) {
  return unit_graph(n, random_connected_edges(n, p, rng));
}

inline fragnet::MarketGraph random_weighted_graph(int n, double p,
                                                  std::mt19937_64& rng) {
  auto edges = random_connected_edges(n, p, rng);
  std::uniform_real_distribution<double> s(0.05, 1.0);
  std::uniform_real_distribution<double> d(0.1, 2.0);
  std::vector<std::tuple<int, int, double, double>> full;
  for (auto [u, v] : edges) full.emplace_back(u, v, s(rng), d(rng));
  return make_graph(n, full);
}

// Every connected labelled graph on n vertices (n <= 5 in practice).
inline std::vector<std::vector<std::pair<int, int>>> all_connected_graphs(int n) {
  auto pairs = complete_edges(n);
  const int m = static_cast<int>(pairs.size());
  std::vector<std::vector<std::pair<int, int>>> out;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < m; ++k)
      if (mask & (1u << k)) edges.push_back(pairs[static_cast<std::size_t>(k)]);
    std::vector<int> root(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) root[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
      while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)];
      return x;
    };
    int comps = n;
    for (auto [u, v] : edges) {
      int ru = find(u), rv = find(v);
      if (ru != rv) {
        root[static_cast<std::size_t>(ru)] = rv;
        --comps;
      }
    }
    if (comps == 1) out.push_back(std::move(edges));
  }
  return out;
}

// Prices that integrate an explicit return matrix; the panel is gap-free.
inline fragnet::PricePanel panel_from_returns(const Eigen::MatrixXd& returns) {
  const int n = static_cast<int>(returns.rows());
  const int days = static_cast<int>(returns.cols()) + 1;
  fragnet::PricePanel panel;
  panel.meta = make_meta(n);
  panel.dates = date_run({2005, 1, 1}, days);
  panel.prices.resize(n, days);
  for (int j = 0; j < n; ++j) {
    panel.prices(j, 0) = 100.0;
    for (int t = 1; t < days; ++t)
      panel.prices(j, t) = panel.prices(j, t - 1) * std::exp(returns(j, t - 1));
  }
  return panel;
}

// Seeded two-regime Gaussian panel, N=30, 1000 return days. Regime A
// (days 1-500) has three factor blocks of 10 indices with within-block
// correlations 0.25/0.30/0.35 (mean 0.3); regime B (days 501-1000) has a
// single global factor with correlation 0.7.
inline fragnet::PricePanel two_regime_panel(std::uint64_t seed = 20140624) {
  const int n = 30;
  const int half = 500;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double vol = 0.01;
  const double rho_block[3] = {0.25, 0.30, 0.35};

  Eigen::MatrixXd r(n, 2 * half);
  for (int t = 0; t < half; ++t) {
    double f[3] = {z(rng), z(rng), z(rng)};
    for (int j = 0; j < n; ++j) {
      int b = j / 10;
      double rho = rho_block[b];
      r(j, t) = vol * (std::sqrt(rho) * f[b] + std::sqrt(1.0 - rho) * z(rng));
    }
  }
  for (int t = half; t < 2 * half; ++t) {
    double fg = z(rng);
    for (int j = 0; j < n; ++j)
      r(j, t) = vol * (std::sqrt(0.7) * fg + std::sqrt(0.3) * z(rng));
  }
  return panel_from_returns(r);
}

}  // namespace testsupport
