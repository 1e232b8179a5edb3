#pragma once

#include "netmeasure/reaction_dsl.hpp"
#include "netmeasure/systems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace testing {

using netmeasure::Index;
using netmeasure::MatrixXd;
using netmeasure::VectorXd;

inline MatrixXd random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Wishart-like SPD matrix with eigenvalues bounded away from zero.
inline MatrixXd random_spd(std::mt19937_64& rng, Index n) {
  const MatrixXd g = random_matrix(rng, n, n);
  return g * g.transpose() / static_cast<double>(n) + 0.1 * MatrixXd::Identity(n, n);
}

/// Random J shifted so its spectral abscissa is at most -margin.
inline MatrixXd random_stable(std::mt19937_64& rng, Index n, double margin = 0.5) {
  MatrixXd j = random_matrix(rng, n, n) / std::sqrt(static_cast<double>(n));
  const double a = Eigen::EigenSolver<MatrixXd>(j, false).eigenvalues().real().maxCoeff();
  j -= (a + margin) * MatrixXd::Identity(n, n);
  return j;
}

inline MatrixXd random_orthogonal(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<MatrixXd> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

/// Determinant by Laplace expansion along the first row; exponential, for
/// n <= 5 only.
inline double cofactor_det(const MatrixXd& m) {
  const Index n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (Index c = 0; c < n; ++c) {
    MatrixXd minor(n - 1, n - 1);
    for (Index i = 1; i < n; ++i)
      for (Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    det += ((c % 2) ? -1.0 : 1.0) * m(0, c) * cofactor_det(minor);
  }
  return det;
}

inline netmeasure::ReactionNetwork enzyme() {
  return netmeasure::parse_network(netmeasure::enzyme_network_source());
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace testing
