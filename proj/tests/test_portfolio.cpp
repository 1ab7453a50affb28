#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fragnet/portfolio.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fragnet;
using Catch::Matchers::WithinAbs;

namespace {

CovarianceMatrix cov_from(std::initializer_list<std::initializer_list<double>> rows) {
  CovarianceMatrix c;
  c.matrix.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) c.matrix(i, j++) = v;
    ++i;
  }
  return c;
}

CovarianceMatrix random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd a(n, n + 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n + 2; ++j) a(i, j) = z(rng);
  CovarianceMatrix c;
  c.matrix = a * a.transpose() / static_cast<double>(n + 2);
  return c;
}

}  // namespace

TEST_CASE("window_covariance: fixtures") {
  SECTION("identical series give a rank-1 matrix of equal entries") {
    Eigen::MatrixXd r(2, 4);
    r << 0.01, -0.02, 0.03, 0.00, 0.01, -0.02, 0.03, 0.00;
    auto rp = testsupport::return_panel_from(r);
    auto cov = window_covariance(rp, {0, 4, rp.dates.back()});
    CHECK_THAT(cov.matrix(0, 0), WithinAbs(cov.matrix(0, 1), 1e-16));
    CHECK_THAT(cov.matrix(0, 0), WithinAbs(cov.matrix(1, 1), 1e-16));
  }
  SECTION("hand moments") {
    Eigen::MatrixXd r(2, 2);
    r << 1, -1, -1, 1;
    auto rp = testsupport::return_panel_from(r);
    auto cov = window_covariance(rp, {0, 2, rp.dates.back()});
    CHECK_THAT(cov.matrix(0, 0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(cov.matrix(0, 1), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(cov.matrix(1, 1), WithinAbs(1.0, 1e-15));
  }
  SECTION("constant series gives a zero row and column") {
    Eigen::MatrixXd r(2, 3);
    r << 0.004, 0.004, 0.004, 0.01, -0.01, 0.02;
    auto rp = testsupport::return_panel_from(r);
    auto cov = window_covariance(rp, {0, 3, rp.dates.back()});
    CHECK(std::abs(cov.matrix(0, 0)) < 1e-30);
    CHECK(std::abs(cov.matrix(0, 1)) < 1e-30);
  }
}

TEST_CASE("min_risk_portfolio: symmetric diagonal splits evenly") {
  auto res = min_risk_portfolio(cov_from({{0.04, 0.0}, {0.0, 0.04}}));
  CHECK_THAT(res.weights(0), WithinAbs(0.5, 1e-10));
  CHECK_THAT(res.weights(1), WithinAbs(0.5, 1e-10));
  CHECK_THAT(res.risk, WithinAbs(0.02, 1e-12));
}

TEST_CASE("min_risk_portfolio: diag(1,3) closed form") {
  auto res = min_risk_portfolio(cov_from({{1.0, 0.0}, {0.0, 3.0}}));
  CHECK_THAT(res.weights(0), WithinAbs(0.75, 1e-10));
  CHECK_THAT(res.weights(1), WithinAbs(0.25, 1e-10));
  CHECK_THAT(res.risk, WithinAbs(0.75, 1e-10));
  CHECK(res.kkt_residual <= 1e-8);
}

TEST_CASE("min_risk_portfolio: active bound (negative correlation pair)") {
  // Unconstrained minimum-variance would short asset 1; the bound binds.
  auto res = min_risk_portfolio(cov_from({{0.01, 0.018}, {0.018, 0.04}}));
  CHECK(res.weights.minCoeff() >= -1e-12);
  CHECK_THAT(res.weights.sum(), WithinAbs(1.0, 1e-10));
  CHECK_THAT(res.weights(0), WithinAbs(1.0, 1e-8));
  CHECK_THAT(res.risk, WithinAbs(0.01, 1e-10));
  CHECK(res.kkt_residual <= 1e-8);
}

TEST_CASE("min_risk_portfolio: random PSD matrices match the active-set oracle") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 60; ++k) {
    int n = 2 + static_cast<int>(rng() % 3);  // 2..4
    auto cov = random_psd(n, rng);
    auto res = min_risk_portfolio(cov);
    double oracle = testsupport::qp_risk_oracle(cov.matrix);
    CHECK_THAT(res.risk, WithinAbs(oracle, 1e-6));
    CHECK(res.kkt_residual <= 1e-8);
    CHECK_THAT(res.weights.sum(), WithinAbs(1.0, 1e-8));
    CHECK(res.weights.minCoeff() >= -1e-10);
    double recomputed = res.weights.dot(cov.matrix * res.weights);
    CHECK_THAT(recomputed, WithinAbs(res.risk, 1e-10));
  }
}

TEST_CASE("min_risk_portfolio: risk never exceeds the best single asset") {
  std::mt19937_64 rng(103);
  for (int k = 0; k < 40; ++k) {
    int n = 2 + static_cast<int>(rng() % 5);
    auto cov = random_psd(n, rng);
    auto res = min_risk_portfolio(cov);
    CHECK(res.risk <= cov.matrix.diagonal().minCoeff() + 1e-10);
  }
}

TEST_CASE("min_risk_portfolio: scaling the covariance scales only the risk") {
  std::mt19937_64 rng(107);
  auto cov = random_psd(5, rng);
  auto base = min_risk_portfolio(cov);
  CovarianceMatrix scaled;
  scaled.matrix = 7.5 * cov.matrix;
  auto res = min_risk_portfolio(scaled);
  CHECK((res.weights - base.weights).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THAT(res.risk, WithinAbs(7.5 * base.risk, 1e-8 * 7.5));
}

TEST_CASE("min_risk_portfolio: permutation equivariance") {
  std::mt19937_64 rng(109);
  auto cov = random_psd(4, rng);
  std::vector<int> perm = {2, 0, 3, 1};
  CovarianceMatrix shuffled;
  shuffled.matrix.resize(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      shuffled.matrix(i, j) = cov.matrix(perm[static_cast<std::size_t>(i)],
                                         perm[static_cast<std::size_t>(j)]);
  auto base = min_risk_portfolio(cov);
  auto res = min_risk_portfolio(shuffled);
  for (int i = 0; i < 4; ++i)
    CHECK_THAT(res.weights(i),
               WithinAbs(base.weights(perm[static_cast<std::size_t>(i)]), 1e-8));
}

TEST_CASE("min_risk_portfolio: singular covariance still yields a valid simplex point") {
  // Duplicated asset makes the QP degenerate but still convex.
  auto res = min_risk_portfolio(cov_from({{1.0, 1.0, 0.0},
                                          {1.0, 1.0, 0.0},
                                          {0.0, 0.0, 2.0}}));
  CHECK_THAT(res.weights.sum(), WithinAbs(1.0, 1e-8));
  CHECK(res.weights.minCoeff() >= -1e-10);
  CHECK(res.kkt_residual <= 1e-8);
  CHECK_THAT(res.risk, WithinAbs(2.0 / 3.0, 1e-8));
}

TEST_CASE("min_risk_portfolio: determinism across repeated calls") {
  std::mt19937_64 rng(113);
  auto cov = random_psd(6, rng);
  auto a = min_risk_portfolio(cov);
  auto b = min_risk_portfolio(cov);
  CHECK(a.weights == b.weights);
  CHECK(a.risk == b.risk);
}

TEST_CASE("min_risk_portfolio: expected returns are accepted but inert at phi = 0") {
  std::mt19937_64 rng(127);
  auto cov = random_psd(4, rng);
  Eigen::VectorXd r(4);
  r << 0.08, -0.02, 0.15, 0.01;
  auto plain = min_risk_portfolio(cov);
  auto with_r = min_risk_portfolio(cov, r);
  CHECK(plain.weights == with_r.weights);
  CHECK(plain.risk == with_r.risk);
  Eigen::VectorXd wrong(3);
  wrong.setZero();
  CHECK_THROWS(min_risk_portfolio(cov, wrong));
}
