// mds.hpp
// Classical (Torgerson) multidimensional scaling of a distance frame:
// double-centre the squared distances, eigendecompose, scale the top
// eigenvectors. Ultrametric distances are generally non-Euclidean, so
// negative eigenvalues are expected; they are clamped and their total
// magnitude reported.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fragnet/correlation.hpp"

namespace fragnet {

struct EmbeddingMap {
  Eigen::MatrixXd coordinates;       // N x dims, centroid at the origin
  std::vector<double> eigenvalues;   // top-dims, descending, unclamped
  double clamped_negative_mass = 0.0;
  bool rank_deficient = false;       // fewer positive eigenvalues than dims
};

inline EmbeddingMap classical_mds(const DistanceFrame& dist, int dims = 2) {
  if (dims != 2 && dims != 3)
    throw std::invalid_argument("classical_mds supports dims in {2, 3}");
  const Eigen::Index n = dist.matrix.rows();
  if (n < 2) throw std::invalid_argument("classical_mds needs N >= 2");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist.matrix(i, i) != 0.0)
      throw std::invalid_argument("distance matrix must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(dist.matrix(i, j) - dist.matrix(j, i)) > 1e-12)
        throw std::invalid_argument("distance matrix must be symmetric");
  }

  Eigen::MatrixXd d2 = dist.matrix.cwiseProduct(dist.matrix);
  Eigen::VectorXd row_mean = d2.rowwise().mean();
  double grand_mean = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand_mean);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("MDS eigendecomposition failed to converge");

  EmbeddingMap map;
  const auto& vals = solver.eigenvalues();  // ascending
  double scale = std::max(1.0, std::abs(vals(n - 1)));
  for (Eigen::Index i = 0; i < n; ++i)
    if (vals(i) < 0.0) map.clamped_negative_mass += -vals(i);

  map.coordinates.setZero(n, dims);
  int positive = 0;
  for (int k = 0; k < dims && k < n; ++k) {
    Eigen::Index col = n - 1 - k;
    double lambda = vals(col);
    map.eigenvalues.push_back(lambda);
    if (lambda <= 1e-12 * scale) continue;  // noise-level axis stays at zero
    ++positive;
    Eigen::VectorXd vec = solver.eigenvectors().col(col);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(vec(i)) > 1e-12) {
        if (vec(i) < 0.0) vec = -vec;
        break;
      }
    }
    map.coordinates.col(k) = vec * std::sqrt(lambda);
  }
  map.rank_deficient = positive < dims;
  return map;
}

}  // namespace fragnet
