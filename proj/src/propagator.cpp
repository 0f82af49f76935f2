#include "twoatom/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "twoatom/errors.hpp"

namespace twoatom {

namespace {

thread_local double krylov_error = 0.0;

}  // namespace

StateVector prepare_initial_state(const FockBasis& basis) {
  if (basis.shape().levels_A < 2) throw DomainError("system A needs an excited level");
  return basis_state(basis, basis.compose(1, 0, 0));
}

StateVector basis_state(const FockBasis& basis, Index i) {
  if (i < 0 || i >= basis.dimension()) throw NotInBasis("basis index out of range");
  StateVector psi{basis.tag(), Eigen::VectorXcd::Zero(basis.dimension())};
  psi.amplitudes(i) = 1.0;
  return psi;
}

Propagator::Propagator(HermitianOperator h, PropagatorOptions options)
    : h_(std::make_shared<const HermitianOperator>(std::move(h))), options_(options) {
  const Index n = h_->dimension();
  method_ = options_.method;
  if (method_ == PropagationMethod::automatic) {
    method_ = n <= options_.dense_threshold ? PropagationMethod::dense : PropagationMethod::krylov;
  }
  const auto [g_lo, g_hi] = h_->gershgorin_bounds();
  if (method_ == PropagationMethod::dense) {
    if (h_->is_real()) {
      real_ = std::make_shared<const linalg::SpectralDecomposition<double>>(
          Eigen::MatrixXd(h_->entries().real()));
      shift_ = n ? real_->eigenvalues(0) : 0.0;
    } else {
      complex_ = std::make_shared<const linalg::SpectralDecomposition<std::complex<double>>>(
          Eigen::MatrixXcd(h_->entries()));
      shift_ = n ? complex_->eigenvalues(0) : 0.0;
    }
  } else {
    // Any lower bound works for the shift; the tighter the better for Im z < 0.
    shift_ = std::max(g_lo, h_->spectral_floor());
    norm_estimate_ = g_hi - shift_;
  }
}

double Propagator::last_error_estimate() { return krylov_error; }

void Propagator::check_basis(const StateVector& psi) const {
  if (!(psi.basis == h_->basis()) || psi.dimension() != h_->dimension()) {
    throw DomainError("state and Hamiltonian live on different bases");
  }
}

Eigen::VectorXcd Propagator::apply_dense(const Eigen::VectorXcd& c, std::complex<double> z) const {
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, -1.0) * z * shift_);
  if (real_) return phase * real_->from_eigenbasis(real_->propagate_coefficients(c, z, shift_));
  return phase * complex_->from_eigenbasis(complex_->propagate_coefficients(c, z, shift_));
}

Eigen::VectorXcd Propagator::apply_krylov(const Eigen::VectorXcd& v, std::complex<double> z,
                                          double tolerance) const {
  const SparseMatrixXcd& m = h_->entries();
  auto apply = [&m](const auto& x, Eigen::VectorXcd& y) { y.noalias() = m * x; };
  linalg::KrylovOptions opts = options_.krylov;
  opts.tolerance = tolerance;
  linalg::KrylovStats stats;
  Eigen::VectorXcd w = linalg::krylov_expv(apply, v, z, shift_, norm_estimate_, opts, &stats);
  krylov_error += stats.error_estimate;
  return std::exp(std::complex<double>(0.0, -1.0) * z * shift_) * w;
}

StateVector Propagator::evolve(const StateVector& psi, double t) const {
  return evolve_complex(psi, std::complex<double>(t, 0.0));
}

StateVector Propagator::evolve_complex(const StateVector& psi, std::complex<double> z) const {
  check_basis(psi);
  if (z.imag() > 0.0) throw DomainError("complex time must satisfy Im z <= 0");
  krylov_error = 0.0;
  if (z == 0.0) return psi;
  if (method_ == PropagationMethod::dense) {
    const Eigen::VectorXcd c =
        real_ ? real_->to_eigenbasis(psi.amplitudes) : complex_->to_eigenbasis(psi.amplitudes);
    return {psi.basis, apply_dense(c, z)};
  }
  return {psi.basis, apply_krylov(psi.amplitudes, z, options_.krylov.tolerance)};
}

std::vector<StateVector> Propagator::evolve_grid(const StateVector& psi,
                                                 std::span<const double> times,
                                                 int workers) const {
  check_basis(psi);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("time grid must be nonnegative and strictly increasing");
    }
  }
  std::vector<StateVector> out(times.size());
  if (times.empty()) return out;

  if (method_ == PropagationMethod::krylov) {
    krylov_error = 0.0;
    double accumulated = 0.0;
    const double span = times.back();
    Eigen::VectorXcd current = psi.amplitudes;
    double t_prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double dt = times[i] - t_prev;
      if (dt > 0.0) {
        const double share = span > 0.0 ? dt / span : 1.0;
        current = apply_krylov(current, dt, options_.krylov.tolerance * share);
        accumulated += krylov_error;
        krylov_error = 0.0;
      }
      out[i] = {psi.basis, current};
      t_prev = times[i];
    }
    krylov_error = accumulated;
    return out;
  }

  const Eigen::VectorXcd c =
      real_ ? real_->to_eigenbasis(psi.amplitudes) : complex_->to_eigenbasis(psi.amplitudes);
  const int threads =
      std::clamp(workers, 1, static_cast<int>(std::min<std::size_t>(times.size(), 64)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < times.size(); i = next++) {
        out[i] = times[i] == 0.0 ? psi : StateVector{psi.basis, apply_dense(c, times[i])};
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

StateVector evolve(const HermitianOperator& h, const StateVector& psi, double t) {
  return Propagator(h).evolve(psi, t);
}

StateVector evolve_complex(const HermitianOperator& h, const StateVector& psi,
                           std::complex<double> z) {
  return Propagator(h).evolve_complex(psi, z);
}

double expectation(const StateVector& psi, const BoundedObservable& o) {
  if (!(psi.basis == o.basis())) throw DomainError("state and observable live on different bases");
  return o.expectation(psi.amplitudes);
}

double energy(const StateVector& psi, const HermitianOperator& h) {
  const Eigen::VectorXcd hpsi = h.entries() * psi.amplitudes;
  return psi.amplitudes.dot(hpsi).real() / psi.amplitudes.squaredNorm();
}

std::string_view to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::automatic: return "automatic";
    case PropagationMethod::dense: return "dense";
    case PropagationMethod::krylov: return "krylov";
  }
  return "unknown";
}

}  // namespace twoatom
