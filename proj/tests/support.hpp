#pragma once

// Small helpers shared by the unit tests and the acceptance binary.

#include <complex>
#include <random>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "twoatom/config.hpp"

namespace testing_support {

using cd = std::complex<double>;

inline Eigen::VectorXcd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(normal(rng), normal(rng));
  return v;
}

inline Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXcd v = random_vector(rng, n);
  return v / v.norm();
}

/// GUE-like Hermitian matrix.
inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(rng, n);
  return 0.5 * (a + a.adjoint());
}

/// Haar-distributed unitary from the QR of a Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(rng, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

/// Small box model: M modes, N_max photons, atoms half a box apart.
inline twoatom::ModelConfig small_box(int modes, int max_photons = 2, double g = 0.05) {
  twoatom::ModelConfig c;
  c.num_modes = modes;
  c.max_photons = max_photons;
  c.coupling_strength = g;
  c.cutoff = 100.0;
  return c;
}

}  // namespace testing_support
