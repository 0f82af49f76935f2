#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "twoatom/config.hpp"
#include "twoatom/field_model.hpp"
#include "twoatom/fock_basis.hpp"

namespace twoatom {

using cd = std::complex<double>;
using SparseMatrixXcd = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

/// Sparse Hermitian matrix with a lower bound on its spectrum.
///
/// Only constructible from conjugate pairs, so entries(i,j) == conj(entries(j,i))
/// holds bit-for-bit; is_exactly_hermitian() verifies it.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Takes ownership of an already-Hermitian matrix; throws if it is not
  /// exactly conjugate-symmetric. spectral_floor defaults to the Gershgorin bound.
  HermitianOperator(BasisTag tag, SparseMatrixXcd matrix);
  HermitianOperator(BasisTag tag, SparseMatrixXcd matrix, double spectral_floor);

  static HermitianOperator from_dense(BasisTag tag, const Eigen::MatrixXcd& dense);

  const BasisTag& basis() const { return tag_; }
  Index dimension() const { return matrix_.rows(); }
  const SparseMatrixXcd& entries() const { return matrix_; }
  double spectral_floor() const { return floor_; }

  /// True when every stored imaginary part is exactly zero.
  bool is_real() const;
  bool is_diagonal() const;
  /// Rigorous bounds from Gershgorin discs.
  std::pair<double, double> gershgorin_bounds() const;

  HermitianOperator with_spectral_floor(double floor) const;

 private:
  BasisTag tag_;
  SparseMatrixXcd matrix_;
  double floor_ = 0.0;
};

bool is_exactly_hermitian(const SparseMatrixXcd& m);

/// Observable 0 <= O <= 1, stored both assembled and in spectral form
/// O = W diag(w) W^dag with W unitary and every weight in [0, 1].
/// Expectation values are evaluated from the spectral form, so they lie in
/// [0, 1] by construction.
class BoundedObservable {
 public:
  /// Diagonal observable in the given basis (weights are the diagonal).
  static BoundedObservable diagonal(BasisTag tag, const Eigen::VectorXd& weights,
                                    std::string name);
  /// General observable from a unitary eigenbasis and weights in [0, 1].
  static BoundedObservable spectral(BasisTag tag, SparseMatrixXcd eigenbasis,
                                    const Eigen::VectorXd& weights, HermitianOperator assembled,
                                    std::string name);
  static BoundedObservable spectral(BasisTag tag, const Eigen::MatrixXcd& eigenbasis,
                                    const Eigen::VectorXd& weights, std::string name);

  const HermitianOperator& op() const { return op_; }
  const BasisTag& basis() const { return op_.basis(); }
  Index dimension() const { return op_.dimension(); }
  bool is_projector() const { return is_projector_; }
  bool is_diagonal() const { return eigenbasis_.size() == 0; }
  const std::string& name() const { return name_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// <psi, O psi> / <psi, psi>, computed as sum w_i |(W^dag psi)_i|^2 / sum |(W^dag psi)_i|^2.
  double expectation(const Eigen::VectorXcd& psi) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const { return op_.entries() * psi; }

 private:
  HermitianOperator op_;
  SparseMatrixXcd eigenbasis_;  // empty => identity
  Eigen::VectorXd weights_;
  bool is_projector_ = false;
  std::string name_;
};

/// Atomic levels: level j of system X has energy j * omega_X; sigma^+ = sum_j |j+1><j|.
struct AtomPair {
  int levels_A = 2;
  int levels_B = 2;
  double omega_A = 1.0;
  double omega_B = 1.0;
};

HermitianOperator build_hamiltonian(const AtomPair& atoms, const FieldModel& field,
                                    CouplingForm form, const FockBasis& basis);
HermitianOperator build_hamiltonian(const ModelConfig& config, const FockBasis& basis);

/// Total excitation number: atomic levels plus photons.
HermitianOperator excitation_number(const FockBasis& basis);

/// 1_A x sum_{e_B} |e_B><e_B| x 1_F.
BoundedObservable excitation_observable_B(const FockBasis& basis);

/// |g_A e_B 0><g_A e_B 0| with e_B the first excited level.
BoundedObservable exchange_projector(const FockBasis& basis);

/// "At least one photon found in [begin, end)": O = 1 - Gamma(1 - S), S the
/// compressed position projector of the field model. Block diagonal in the
/// photon number; a projector whenever S is (always on the lattice).
BoundedObservable local_photon_observable(const FockBasis& basis, const FieldModel& field,
                                          double begin, double end);

/// Second quantization of a one-particle operator T: <n|Gamma(T)|m> =
/// perm(T[rows n, rows m]) / sqrt(prod n! prod m!) on each photon-number
/// sector, identity on the atoms.
SparseMatrixXcd second_quantize(const FockBasis& basis, const Eigen::MatrixXcd& one_particle);

struct SpectralBounds {
  double lower = 0.0;
  double upper = 0.0;
  double residual_lower = 0.0;
  double residual_upper = 0.0;
  bool dense = true;
};

/// Enclosure of the extreme eigenvalues. Dense diagonalization up to
/// dense_threshold, Lanczos with residual-widened Ritz values above it.
SpectralBounds spectral_bounds(const HermitianOperator& h, Index dense_threshold = 2000,
                               double tolerance = 1e-10, int max_iterations = 2000);

/// One "row col re im" line per stored entry, preceded by a '#' header.
void write_triplets(std::ostream& out, const HermitianOperator& h);

}  // namespace twoatom
