#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twoatom/fock_basis.hpp"
#include "twoatom/linalg.hpp"
#include "twoatom/operators.hpp"

namespace twoatom {

/// Complex amplitudes over a basis identified by `basis`.
struct StateVector {
  BasisTag basis;
  Eigen::VectorXcd amplitudes;

  Index dimension() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

/// |e_A g_B 0>: first excited level of A, ground B, photon vacuum.
StateVector prepare_initial_state(const FockBasis& basis);
StateVector basis_state(const FockBasis& basis, Index i);

enum class PropagationMethod { automatic, dense, krylov };

struct PropagatorOptions {
  PropagationMethod method = PropagationMethod::automatic;
  Index dense_threshold = 2000;
  linalg::KrylovOptions krylov;
};

/// e^{-iHz} for one Hamiltonian. Dense spectral decomposition (real arithmetic
/// when H is real) or adaptive Lanczos stepping. Thread-safe after construction.
class Propagator {
 public:
  explicit Propagator(HermitianOperator h, PropagatorOptions options = {});

  const HermitianOperator& hamiltonian() const { return *h_; }
  /// Method actually used (automatic resolved by dimension).
  PropagationMethod method() const { return method_; }
  /// Shift applied before exponentiation; never above the lowest eigenvalue.
  double shift() const { return shift_; }
  const PropagatorOptions& options() const { return options_; }

  StateVector evolve(const StateVector& psi, double t) const;
  /// Unnormalized e^{-iHz} psi for Im z <= 0; DomainError otherwise.
  StateVector evolve_complex(const StateVector& psi, std::complex<double> z) const;

  /// States at every time of an increasing grid starting at or after 0.
  /// Dense: independent points, spread over `workers` threads.
  /// Krylov: chained, each interval gets a share of the tolerance
  /// proportional to its length.
  std::vector<StateVector> evolve_grid(const StateVector& psi, std::span<const double> times,
                                       int workers = 1) const;

  /// Accumulated Krylov error estimate of the last call on this thread.
  static double last_error_estimate();

 private:
  Eigen::VectorXcd apply_dense(const Eigen::VectorXcd& coefficients, std::complex<double> z) const;
  Eigen::VectorXcd apply_krylov(const Eigen::VectorXcd& v, std::complex<double> z,
                                double tolerance) const;
  void check_basis(const StateVector& psi) const;

  std::shared_ptr<const HermitianOperator> h_;
  PropagatorOptions options_;
  PropagationMethod method_ = PropagationMethod::dense;
  double shift_ = 0.0;
  double norm_estimate_ = 0.0;
  std::shared_ptr<const linalg::SpectralDecomposition<double>> real_;
  std::shared_ptr<const linalg::SpectralDecomposition<std::complex<double>>> complex_;
};

StateVector evolve(const HermitianOperator& h, const StateVector& psi, double t);
StateVector evolve_complex(const HermitianOperator& h, const StateVector& psi,
                           std::complex<double> z);

/// <psi|O|psi> for a unit state, in [0, 1] by construction.
double expectation(const StateVector& psi, const BoundedObservable& o);

/// <psi|H|psi> / <psi|psi>.
double energy(const StateVector& psi, const HermitianOperator& h);

std::string_view to_string(PropagationMethod method);

}  // namespace twoatom
