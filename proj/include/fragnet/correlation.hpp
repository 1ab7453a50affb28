// correlation.hpp
// Rolling windows over the return panel and the per-window correlation /
// ultrametric-distance frames, plus the two market indicators computed
// directly from a correlation matrix (mean correlation and eigen-entropy).

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fragnet/date.hpp"
#include "fragnet/panel.hpp"

namespace fragnet {

struct WindowSpec {
  std::size_t start_index = 0;  // into return columns
  std::size_t length = 0;       // tau, in return days
  Date end_date;                // date of the last return in the window
};

// Pearson correlation matrix over one window, population moments.
// Rows whose window is constant are flagged and get C_ij = 0 (j != i).
struct CorrelationFrame {
  Date end_date;
  std::size_t tau = 0;
  Eigen::MatrixXd matrix;               // N x N, symmetric, unit diagonal
  std::vector<int> zero_variance_rows;  // ascending
};

// D_ij = sqrt(2 (1 - C_ij)), in [0, 2].
struct DistanceFrame {
  Date end_date;
  std::size_t tau = 0;
  Eigen::MatrixXd matrix;
};

// Window start indices 0, shift, 2*shift, ... while start + tau fits.
inline std::vector<WindowSpec> enumerate_windows(std::size_t num_return_days,
                                                 std::size_t tau = 80,
                                                 std::size_t shift = 20) {
  if (tau < 2) throw std::invalid_argument("tau must be at least 2");
  if (shift < 1) throw std::invalid_argument("shift must be at least 1");
  if (num_return_days < tau)
    throw std::invalid_argument("fewer return days than the window length");
  std::vector<WindowSpec> out;
  for (std::size_t start = 0; start + tau <= num_return_days; start += shift)
    out.push_back(WindowSpec{start, tau, Date{}});
  return out;
}

inline std::vector<WindowSpec> enumerate_windows(const ReturnPanel& returns,
                                                 std::size_t tau = 80,
                                                 std::size_t shift = 20) {
  auto out = enumerate_windows(static_cast<std::size_t>(returns.day_count()),
                               tau, shift);
  for (auto& w : out) w.end_date = returns.dates[w.start_index + w.length - 1];
  return out;
}

namespace detail {

inline void check_window(const ReturnPanel& returns, const WindowSpec& w) {
  if (w.length < 2) throw std::invalid_argument("window length must be >= 2");
  if (w.start_index + w.length >
      static_cast<std::size_t>(returns.day_count()))
    throw std::invalid_argument("window exceeds available return days");
}

}  // namespace detail

inline CorrelationFrame correlation_frame(const ReturnPanel& returns,
                                          const WindowSpec& window) {
  detail::check_window(returns, window);
  const Eigen::Index n = returns.index_count();
  const Eigen::Index tau = static_cast<Eigen::Index>(window.length);
  const auto block = returns.returns.block(
      0, static_cast<Eigen::Index>(window.start_index), n, tau);

  CorrelationFrame frame;
  frame.end_date = window.end_date;
  frame.tau = window.length;
  frame.matrix = Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd mean(n), sigma(n);
  std::vector<char> constant(static_cast<std::size_t>(n), 0);
  Eigen::MatrixXd centered(n, tau);
  for (Eigen::Index j = 0; j < n; ++j) {
    double lo = block(j, 0), hi = block(j, 0), sum = 0.0;
    for (Eigen::Index t = 0; t < tau; ++t) {
      double v = block(j, t);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean(j) = sum / static_cast<double>(tau);
    constant[static_cast<std::size_t>(j)] = (lo == hi);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < tau; ++t) {
      centered(j, t) = block(j, t) - mean(j);
      ss += centered(j, t) * centered(j, t);
    }
    sigma(j) = std::sqrt(ss / static_cast<double>(tau));
    if (constant[static_cast<std::size_t>(j)])
      frame.zero_variance_rows.push_back(static_cast<int>(j));
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double c = 0.0;
      if (!constant[static_cast<std::size_t>(i)] &&
          !constant[static_cast<std::size_t>(j)]) {
        double cov = 0.0;
        for (Eigen::Index t = 0; t < tau; ++t)
          cov += centered(i, t) * centered(j, t);
        cov /= static_cast<double>(tau);
        c = cov / (sigma(i) * sigma(j));
        c = std::clamp(c, -1.0, 1.0);
      }
      frame.matrix(i, j) = c;
      frame.matrix(j, i) = c;
    }
  }
  return frame;
}

inline DistanceFrame distance_frame(const CorrelationFrame& frame) {
  DistanceFrame out;
  out.end_date = frame.end_date;
  out.tau = frame.tau;
  const Eigen::Index n = frame.matrix.rows();
  out.matrix.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d = std::sqrt(2.0 * (1.0 - frame.matrix(i, j)));
      out.matrix(i, j) = d;
      out.matrix(j, i) = d;
    }
  return out;
}

// Mean of the N(N-1)/2 strictly-upper-triangular entries.
inline double mean_correlation(const CorrelationFrame& frame) {
  const Eigen::Index n = frame.matrix.rows();
  if (n < 2) throw std::invalid_argument("mean_correlation needs N >= 2");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) sum += frame.matrix(i, j);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

struct EigenEntropyResult {
  double entropy = 0.0;
  bool degenerate_top = false;  // top eigenvalue within tolerance of the next
};

// Shannon entropy of the normalized principal-eigenvector magnitudes of the
// correlation matrix. Lies in [0, ln N].
inline EigenEntropyResult eigen_entropy(const CorrelationFrame& frame) {
  const Eigen::Index n = frame.matrix.rows();
  if (n < 2) throw std::invalid_argument("eigen_entropy needs N >= 2");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(frame.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  EigenEntropyResult res;
  const auto& vals = solver.eigenvalues();  // ascending
  if (n >= 2) {
    double gap = vals(n - 1) - vals(n - 2);
    res.degenerate_top = gap <= 1e-9 * std::max(1.0, std::abs(vals(n - 1)));
  }
  Eigen::VectorXd x = solver.eigenvectors().col(n - 1).cwiseAbs();
  double total = x.sum();
  double h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = x(i) / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  res.entropy = h;
  return res;
}

// Delimited-text frame export: one header row of index codes, then N rows.
inline void write_frame_csv(const CorrelationFrame& frame,
                            const std::vector<IndexMeta>& meta,
                            std::ostream& out) {
  const Eigen::Index n = frame.matrix.rows();
  if (static_cast<Eigen::Index>(meta.size()) != n)
    throw std::invalid_argument("metadata size does not match frame");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j) out << ',';
    out << meta[static_cast<std::size_t>(j)].index_code;
  }
  out << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof(buf), "%.12g", frame.matrix(i, j));
      out << buf;
    }
    out << '\n';
  }
}

inline std::string frame_csv_name(const CorrelationFrame& frame) {
  return "frame_" + frame.end_date.iso() + "_" + std::to_string(frame.tau) +
         ".csv";
}

}  // namespace fragnet
