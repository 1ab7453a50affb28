#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fragnet/network_measures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fragnet;
using Catch::Matchers::WithinAbs;

namespace {

MarketGraph star4() {  // hub 0, leaves 1..3
  return testsupport::unit_graph(4, {{0, 1}, {0, 2}, {0, 3}});
}

MarketGraph path3() { return testsupport::unit_graph(3, {{0, 1}, {1, 2}}); }

MarketGraph two_cliques_bridge() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
  for (int i = 4; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) edges.emplace_back(i, j);
  edges.emplace_back(3, 4);
  return testsupport::unit_graph(8, edges);
}

MarketGraph clique_ring() {  // four K4 blocks joined in a ring
  std::vector<std::pair<int, int>> edges;
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) edges.emplace_back(4 * b + i, 4 * b + j);
  edges.emplace_back(3, 4);
  edges.emplace_back(7, 8);
  edges.emplace_back(11, 12);
  edges.emplace_back(15, 0);
  return testsupport::unit_graph(16, edges);
}

}  // namespace

TEST_CASE("degree_stats fixtures") {
  auto k4 = testsupport::unit_graph(4, testsupport::complete_edges(4));
  auto s = degree_stats(k4);
  CHECK(s.num_edges == 6);
  CHECK_THAT(s.edge_density, WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.avg_degree, WithinAbs(3.0, 1e-15));
  CHECK_THAT(s.avg_weighted_degree, WithinAbs(3.0, 1e-15));

  auto p4 = testsupport::unit_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  auto sp = degree_stats(p4);
  CHECK(sp.num_edges == 3);
  CHECK_THAT(sp.edge_density, WithinAbs(0.5, 1e-15));
  CHECK_THAT(sp.avg_degree, WithinAbs(1.5, 1e-15));

  auto k3 = testsupport::make_graph(
      3, {{0, 1, 0.5, 1.0}, {0, 2, 0.5, 1.0}, {1, 2, 0.5, 1.0}});
  CHECK_THAT(degree_stats(k3).avg_weighted_degree, WithinAbs(1.0, 1e-15));
}

TEST_CASE("path_stats fixtures") {
  auto k3 = testsupport::unit_graph(3, testsupport::complete_edges(3));
  auto s = path_stats(k3);
  CHECK_THAT(s.avg_path_length, WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.diameter, WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.efficiency, WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.grc, WithinAbs(0.0, 1e-15));

  auto sp = path_stats(path3());
  CHECK_THAT(sp.avg_path_length, WithinAbs(4.0 / 3.0, 1e-14));
  CHECK_THAT(sp.diameter, WithinAbs(2.0, 1e-15));
  CHECK_THAT(sp.efficiency, WithinAbs(5.0 / 6.0, 1e-14));

  CHECK_THAT(path_stats(star4()).grc, WithinAbs(1.0 / 3.0, 1e-14));
}

TEST_CASE("path_stats on unit-distance graphs equals the BFS oracle") {
  std::mt19937_64 rng(307);
  for (int k = 0; k < 25; ++k) {
    int n = 4 + static_cast<int>(rng() % 7);
    auto g = testsupport::random_unit_graph(n, 0.35, rng);
    auto hops = testsupport::bfs_hops(g);
    auto s = path_stats(g);
    double sum = 0.0, inv = 0.0, diam = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        sum += hops(i, j);
        inv += 1.0 / hops(i, j);
        diam = std::max(diam, hops(i, j));
      }
    double pairs = static_cast<double>(n) * (n - 1);
    CHECK_THAT(s.avg_path_length, WithinAbs(sum / pairs, 1e-12));
    CHECK_THAT(s.efficiency, WithinAbs(inv / pairs, 1e-12));
    CHECK_THAT(s.diameter, WithinAbs(diam, 1e-12));
  }
}

TEST_CASE("efficiency strictly increases when a shortest-path edge shortens") {
  auto base = testsupport::make_graph(3, {{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}});
  auto faster = testsupport::make_graph(3, {{0, 1, 1.0, 0.5}, {1, 2, 1.0, 1.0}});
  CHECK(path_stats(faster).efficiency > path_stats(base).efficiency);
}

TEST_CASE("clustering_avg fixtures") {
  CHECK_THAT(clustering_avg(star4()), WithinAbs(0.0, 1e-15));
  auto k3 = testsupport::unit_graph(3, testsupport::complete_edges(3));
  CHECK_THAT(clustering_avg(k3), WithinAbs(1.0, 1e-15));
  auto half = testsupport::make_graph(
      3, {{0, 1, 0.5, 1.0}, {0, 2, 0.5, 1.0}, {1, 2, 0.5, 1.0}});
  CHECK_THAT(clustering_avg(half), WithinAbs(0.5, 1e-14));
}

TEST_CASE("louvain_partition: two cliques and a bridge") {
  auto g = two_cliques_bridge();
  auto part = louvain_partition(g);
  // Vertices 0..3 together, 4..7 together, in different communities.
  for (int i = 1; i < 4; ++i) CHECK(part.assignment[0] == part.assignment[static_cast<std::size_t>(i)]);
  for (int i = 5; i < 8; ++i) CHECK(part.assignment[4] == part.assignment[static_cast<std::size_t>(i)]);
  CHECK(part.assignment[0] != part.assignment[4]);
  CHECK_THAT(part.modularity, WithinAbs(modularity(g, part.assignment), 1e-10));
  // Direct evaluation against the known assignment.
  std::vector<int> expected = {0, 0, 0, 0, 1, 1, 1, 1};
  CHECK_THAT(part.modularity, WithinAbs(modularity(g, expected), 1e-12));
  CHECK(part.pass_count >= 1);
}

TEST_CASE("louvain_partition: complete graph collapses to one community") {
  auto g = testsupport::unit_graph(6, testsupport::complete_edges(6));
  auto part = louvain_partition(g);
  for (int c : part.assignment) CHECK(c == 0);
  CHECK(part.modularity <= 1e-12);
}

TEST_CASE("louvain_partition: ring of four cliques scores above 0.5") {
  auto part = louvain_partition(clique_ring());
  CHECK(part.modularity > 0.5);
  // Each block of four ends up together.
  for (int b = 0; b < 4; ++b)
    for (int i = 1; i < 4; ++i)
      CHECK(part.assignment[static_cast<std::size_t>(4 * b)] ==
            part.assignment[static_cast<std::size_t>(4 * b + i)]);
}

TEST_CASE("louvain_partition: beats the trivial partition on random graphs") {
  std::mt19937_64 rng(311);
  for (int k = 0; k < 15; ++k) {
    int n = 6 + static_cast<int>(rng() % 8);
    auto g = testsupport::random_weighted_graph(n, 0.3, rng);
    auto part = louvain_partition(g);
    std::vector<int> trivial(static_cast<std::size_t>(n), 0);
    CHECK(part.modularity >= modularity(g, trivial) - 1e-12);
    // ids contiguous from zero
    int maxid = 0;
    for (int c : part.assignment) maxid = std::max(maxid, c);
    std::vector<char> seen(static_cast<std::size_t>(maxid) + 1, 0);
    for (int c : part.assignment) seen[static_cast<std::size_t>(c)] = 1;
    for (char s : seen) CHECK(s == 1);
  }
}

TEST_CASE("assortativity fixtures") {
  auto reg = assortativity(testsupport::unit_graph(4, testsupport::complete_edges(4)));
  CHECK(reg.degenerate);
  CHECK(reg.value == 0.0);

  auto ring = assortativity(testsupport::unit_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
  CHECK(ring.degenerate);

  auto star = assortativity(star4());
  CHECK(!star.degenerate);
  CHECK_THAT(star.value, WithinAbs(-1.0, 1e-12));

  std::mt19937_64 rng(313);
  for (int k = 0; k < 20; ++k) {
    auto g = testsupport::random_weighted_graph(8, 0.4, rng);
    auto r = assortativity(g);
    if (!r.degenerate) {
      CHECK(r.value >= -1.0 - 1e-9);
      CHECK(r.value <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("network_entropy fixtures") {
  CHECK_THAT(network_entropy(testsupport::unit_graph(4, testsupport::complete_edges(4))),
             WithinAbs(0.0, 1e-15));
  CHECK_THAT(network_entropy(star4()), WithinAbs(std::log(2.0), 1e-12));
  CHECK_THAT(network_entropy(path3()), WithinAbs(std::log(2.0), 1e-12));
}

TEST_CASE("clique_number fixtures and oracle") {
  CHECK(clique_number(testsupport::unit_graph(6, testsupport::complete_edges(6))) == 6);
  CHECK(clique_number(star4()) == 2);
  auto pendant = testsupport::unit_graph(
      5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}});
  CHECK(clique_number(pendant) == 4);

  std::mt19937_64 rng(317);
  for (int k = 0; k < 30; ++k) {
    int n = 5 + static_cast<int>(rng() % 8);  // 5..12
    auto g = testsupport::random_unit_graph(n, 0.5, rng);
    CHECK(clique_number(g) == testsupport::clique_bruteforce(g));
  }
}

TEST_CASE("eigenvector_centrality fixtures") {
  auto kn = testsupport::unit_graph(5, testsupport::complete_edges(5));
  auto cv = eigenvector_centrality(kn);
  CHECK_THAT(cv.eigenvalue, WithinAbs(4.0, 1e-10));
  for (int i = 0; i < 5; ++i)
    CHECK_THAT(cv.values(i), WithinAbs(1.0 / std::sqrt(5.0), 1e-10));

  auto sv = eigenvector_centrality(star4());
  CHECK_THAT(sv.eigenvalue, WithinAbs(std::sqrt(3.0), 1e-10));
  CHECK_THAT(sv.values(0), WithinAbs(std::sqrt(0.5), 1e-10));
  for (int i = 1; i < 4; ++i)
    CHECK_THAT(sv.values(i), WithinAbs(std::sqrt(1.0 / 6.0), 1e-10));

  // Weighted path with strengths (1, 0.5) against a direct eigensolve.
  auto wp = testsupport::make_graph(3, {{0, 1, 1.0, 1.0}, {1, 2, 0.5, 1.0}});
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  a(1, 2) = a(2, 1) = 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd expected = es.eigenvectors().col(2);
  if (expected.sum() < 0) expected = -expected;
  auto wv = eigenvector_centrality(wp);
  CHECK_THAT(wv.eigenvalue, WithinAbs(es.eigenvalues()(2), 1e-10));
  CHECK((wv.values - expected).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THAT(wv.values.norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("scalar measures are permutation invariant") {
  std::mt19937_64 rng(331);
  auto g = testsupport::random_weighted_graph(7, 0.45, rng);
  std::vector<int> perm = {4, 2, 6, 0, 3, 5, 1};
  MarketGraph h;
  h.vertices = g.vertices;
  h.kind = g.kind;
  h.frame = g.frame;
  for (const auto& e : g.edges)
    h.edges.push_back({perm[static_cast<std::size_t>(e.u)],
                       perm[static_cast<std::size_t>(e.v)], e.strength, e.distance});
  h.sort_edges();

  auto sg = degree_stats(g), sh = degree_stats(h);
  CHECK(sg.num_edges == sh.num_edges);
  CHECK_THAT(sg.avg_weighted_degree, WithinAbs(sh.avg_weighted_degree, 1e-12));
  CHECK_THAT(clustering_avg(g), WithinAbs(clustering_avg(h), 1e-12));
  CHECK_THAT(network_entropy(g), WithinAbs(network_entropy(h), 1e-12));
  CHECK(clique_number(g) == clique_number(h));
  auto pg = path_stats(g), ph = path_stats(h);
  CHECK_THAT(pg.avg_path_length, WithinAbs(ph.avg_path_length, 1e-12));
  CHECK_THAT(pg.diameter, WithinAbs(ph.diameter, 1e-12));
  CHECK_THAT(pg.efficiency, WithinAbs(ph.efficiency, 1e-12));
  CHECK_THAT(pg.grc, WithinAbs(ph.grc, 1e-12));
  auto ag = assortativity(g), ah = assortativity(h);
  CHECK(ag.degenerate == ah.degenerate);
  CHECK_THAT(ag.value, WithinAbs(ah.value, 1e-12));
}

TEST_CASE("measures require a connected graph") {
  auto disconnected = testsupport::unit_graph(4, {{0, 1}, {2, 3}});
  CHECK_THROWS(degree_stats(disconnected));
  CHECK_THROWS(path_stats(disconnected));
  CHECK_THROWS(louvain_partition(disconnected));
}
