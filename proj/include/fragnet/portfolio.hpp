// portfolio.hpp
// Minimum-risk portfolio over a window covariance matrix: the convex QP
//   minimize w' S w   subject to  sum_i w_i = 1,  w_i >= 0
// solved with a primal active-set method. Risk appetite is fixed at zero,
// so expected returns never enter the objective; they are accepted only so
// the general objective signature exists in one place.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fragnet/correlation.hpp"
#include "fragnet/panel.hpp"

namespace fragnet {

struct CovarianceMatrix {
  Eigen::MatrixXd matrix;  // N x N, symmetric PSD
};

struct PortfolioResult {
  Eigen::VectorXd weights;    // simplex point
  double risk = 0.0;          // w' S w
  double kkt_residual = 0.0;
  int iterations = 0;
};

// Population covariance over the window, same moment convention as the
// correlation frames.
inline CovarianceMatrix window_covariance(const ReturnPanel& returns,
                                          const WindowSpec& window) {
  detail::check_window(returns, window);
  const Eigen::Index n = returns.index_count();
  const Eigen::Index tau = static_cast<Eigen::Index>(window.length);
  const auto block = returns.returns.block(
      0, static_cast<Eigen::Index>(window.start_index), n, tau);

  Eigen::VectorXd mean(n);
  for (Eigen::Index j = 0; j < n; ++j) mean(j) = block.row(j).sum() / tau;
  Eigen::MatrixXd centered = block.colwise() - mean;

  CovarianceMatrix cov;
  cov.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index t = 0; t < tau; ++t) s += centered(i, t) * centered(j, t);
      s /= static_cast<double>(tau);
      cov.matrix(i, j) = s;
      cov.matrix(j, i) = s;
    }
  return cov;
}

namespace detail {

// Equality-constrained subproblem: minimize x'Sx over the free set with
// 1'x = 1. Solved through the bordered KKT system; rank-deficient S yields
// the minimum-norm solution, which keeps the iteration deterministic.
inline Eigen::VectorXd solve_equality_qp(const Eigen::MatrixXd& sigma,
                                         const std::vector<int>& free) {
  const int k = static_cast<int>(free.size());
  Eigen::MatrixXd kkt(k + 1, k + 1);
  kkt.setZero();
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) kkt(a, b) = 2.0 * sigma(free[a], free[b]);
  for (int a = 0; a < k; ++a) {
    kkt(a, k) = 1.0;
    kkt(k, a) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol =
      kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol;  // first k entries are weights, last is the multiplier
}

}  // namespace detail

// Max KKT violation of (stationarity, feasibility, complementarity) for a
// candidate weight vector; used both by the solver and by verification.
inline double portfolio_kkt_residual(const CovarianceMatrix& cov,
                                     const Eigen::VectorXd& w) {
  const Eigen::Index n = cov.matrix.rows();
  Eigen::VectorXd g = 2.0 * cov.matrix * w;
  // Multiplier estimate from the support.
  double nu = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (w(i) > 1e-9) {
      nu += g(i);
      ++support;
    }
  if (support == 0) return std::numeric_limits<double>::infinity();
  nu /= support;
  double res = std::abs(w.sum() - 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    res = std::max(res, -w(i));
    if (w(i) > 1e-9)
      res = std::max(res, std::abs(g(i) - nu));
    else
      res = std::max(res, nu - g(i));  // bound multiplier must be >= 0
  }
  return res;
}

// `expected_returns` completes the general mean-variance objective
// w'Sw - phi R'w; the risk appetite is pinned at phi = 0, so the vector is
// validated for shape and otherwise unused.
inline PortfolioResult min_risk_portfolio(
    const CovarianceMatrix& cov,
    const std::optional<Eigen::VectorXd>& expected_returns = std::nullopt,
    int max_iterations = 5000) {
  const Eigen::Index n = cov.matrix.rows();
  if (n < 2) throw std::invalid_argument("portfolio needs N >= 2");
  if (expected_returns && expected_returns->size() != n)
    throw std::invalid_argument("expected returns size does not match covariance");
  const Eigen::MatrixXd& sigma = cov.matrix;

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<char> is_free(static_cast<std::size_t>(n), 1);
  constexpr double feas_tol = 1e-12;
  constexpr double kkt_tol = 1e-10;

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    std::vector<int> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (is_free[static_cast<std::size_t>(i)]) free.push_back(static_cast<int>(i));

    Eigen::VectorXd sol = detail::solve_equality_qp(sigma, free);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(n);
    for (std::size_t a = 0; a < free.size(); ++a) target(free[a]) = sol(static_cast<Eigen::Index>(a));
    const double nu = sol(static_cast<Eigen::Index>(free.size()));

    double min_target = 0.0;
    for (int i : free) min_target = std::min(min_target, target(i));

    if (min_target >= -feas_tol) {
      // Feasible stationary point on the working set; test bound multipliers.
      w = target;
      for (int i : free) w(i) = std::max(w(i), 0.0);
      Eigen::VectorXd g = 2.0 * sigma * w;
      int release = -1;
      double worst = -kkt_tol;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (is_free[static_cast<std::size_t>(i)]) continue;
        double lambda = g(i) - nu;
        if (lambda < worst) {
          worst = lambda;
          release = static_cast<int>(i);
        }
      }
      if (release < 0) break;  // optimal
      is_free[static_cast<std::size_t>(release)] = 1;
    } else {
      // Step toward the subproblem solution until the first weight hits zero.
      double alpha = 1.0;
      int blocking = -1;
      for (int i : free) {
        double d = target(i) - w(i);
        if (d < -feas_tol) {
          double a = w(i) / (w(i) - target(i));
          if (a < alpha - 1e-15) {
            alpha = a;
            blocking = i;
          }
        }
      }
      if (blocking < 0)
        throw std::runtime_error("portfolio solver lost feasibility");
      w += alpha * (target - w);
      w(blocking) = 0.0;
      is_free[static_cast<std::size_t>(blocking)] = 0;
    }
  }
  if (iter >= max_iterations)
    throw std::runtime_error("portfolio solver iteration budget exceeded");

  PortfolioResult res;
  res.weights = w;
  res.risk = w.dot(sigma * w);
  res.kkt_residual = portfolio_kkt_residual(cov, w);
  res.iterations = iter + 1;
  return res;
}

}  // namespace fragnet
