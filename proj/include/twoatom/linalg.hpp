#pragma once

// Scalar-generic kernels behind the propagator and the spectral estimates.
// Everything here works on plain Eigen types; the domain classes wrap them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "twoatom/errors.hpp"

namespace twoatom::linalg {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

/// phi1(z) = (e^z - 1) / z, accurate near z = 0.
inline std::complex<double> phi1(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term = 1.0;
    std::complex<double> sum = 1.0;
    for (int k = 2; k < 22; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

/// Eigendecomposition H = V diag(E) V^dag of a dense Hermitian matrix.
/// Scalar is double for real-symmetric H (half the work, real eigenvectors).
template <typename Scalar>
struct SpectralDecomposition {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;

  explicit SpectralDecomposition(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("dense Hermitian eigensolver failed", std::nan(""));
    }
    eigenvalues = solver.eigenvalues();
    eigenvectors = solver.eigenvectors();
  }

  Eigen::Index dimension() const { return eigenvalues.size(); }

  /// Coefficients V^dag psi.
  Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& psi) const {
    if constexpr (is_complex<Scalar>::value) {
      return eigenvectors.adjoint() * psi;
    } else {
      Eigen::VectorXd re = eigenvectors.transpose() * psi.real();
      Eigen::VectorXd im = eigenvectors.transpose() * psi.imag();
      Eigen::VectorXcd out(re.size());
      out.real() = re;
      out.imag() = im;
      return out;
    }
  }

  /// V c.
  Eigen::VectorXcd from_eigenbasis(const Eigen::VectorXcd& c) const {
    if constexpr (is_complex<Scalar>::value) {
      return eigenvectors * c;
    } else {
      Eigen::VectorXd re = eigenvectors * c.real();
      Eigen::VectorXd im = eigenvectors * c.imag();
      Eigen::VectorXcd out(re.size());
      out.real() = re;
      out.imag() = im;
      return out;
    }
  }

  /// e^{-i (H - shift) z} applied to eigenbasis coefficients. For Im z <= 0 and
  /// shift <= min E every factor has modulus <= 1.
  Eigen::VectorXcd propagate_coefficients(const Eigen::VectorXcd& c, std::complex<double> z,
                                          double shift) const {
    const std::complex<double> minus_i_z = std::complex<double>(0.0, -1.0) * z;
    Eigen::VectorXcd out(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      out(k) = std::exp(minus_i_z * (eigenvalues(k) - shift)) * c(k);
    }
    return out;
  }
};

/// Result of a Lanczos run: orthonormal basis, tridiagonal coefficients.
struct LanczosBasis {
  Eigen::MatrixXcd vectors;  // dimension x steps
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples vector j and j+1; beta.back() is the residual norm
  bool invariant = false;    // happy breakdown: span is H-invariant

  int steps() const { return static_cast<int>(alpha.size()); }
};

/// Lanczos with full (twice-iterated Gram-Schmidt) reorthogonalization.
/// `apply(x, y)` must write H x into y.
template <typename Apply>
LanczosBasis lanczos(Apply&& apply, const Eigen::VectorXcd& start, int max_steps,
                     double breakdown_tolerance) {
  const Eigen::Index n = start.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(max_steps, n));
  LanczosBasis out;
  out.vectors.resize(n, m);
  out.vectors.col(0) = start / start.norm();
  Eigen::VectorXcd w(n);
  for (int j = 0; j < m; ++j) {
    apply(out.vectors.col(j), w);
    const double a = out.vectors.col(j).dot(w).real();
    out.alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd proj = out.vectors.leftCols(j + 1).adjoint() * w;
      w.noalias() -= out.vectors.leftCols(j + 1) * proj;
    }
    const double b = w.norm();
    out.beta.push_back(b);
    if (b <= breakdown_tolerance || j + 1 == n) {
      out.invariant = true;
      out.vectors.conservativeResize(n, j + 1);
      return out;
    }
    if (j + 1 < m) out.vectors.col(j + 1) = w / b;
  }
  return out;
}

/// Real symmetric tridiagonal eigendecomposition of the Lanczos projection.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tridiagonal_eigen(const LanczosBasis& basis) {
  const int m = basis.steps();
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int j = 0; j < m; ++j) diag(j) = basis.alpha[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < m; ++j) sub(j) = basis.beta[static_cast<std::size_t>(j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  return solver;
}

struct KrylovOptions {
  int dimension = 30;
  double tolerance = 1e-10;  // total error budget in vector norm
  int max_steps = 100000;
};

struct KrylovStats {
  int steps = 0;
  int rejected = 0;
  double error_estimate = 0.0;
};

/// w = e^{-i (H - shift) z} v by adaptive Lanczos time stepping.
///
/// The step along z is split into fractions; each accepted fraction tau keeps
/// the local error estimate below tolerance * tau, so the total stays below
/// tolerance * ||v||. Requires Im z <= 0 and shift <= the lowest eigenvalue of H.
template <typename Apply>
Eigen::VectorXcd krylov_expv(Apply&& apply, const Eigen::VectorXcd& v, std::complex<double> z,
                             double shift, double norm_estimate, const KrylovOptions& options,
                             KrylovStats* stats = nullptr) {
  using cd = std::complex<double>;
  if (z.imag() > 0.0) throw DomainError("krylov_expv: Im z must be <= 0");
  Eigen::VectorXcd w = v;
  const double v_norm = v.norm();
  KrylovStats local;
  if (v_norm == 0.0 || z == cd(0.0, 0.0)) {
    if (stats) *stats = local;
    return w;
  }
  auto shifted = [&apply, shift](const auto& x, Eigen::VectorXcd& y) {
    apply(x, y);
    y.noalias() -= shift * x;
  };
  const double breakdown = 1e-13 * std::max(norm_estimate, 1.0);
  const int m = options.dimension;
  double done = 0.0;
  double tau = 1.0;
  const cd minus_i_z = cd(0.0, -1.0) * z;
  while (done < 1.0) {
    if (++local.steps > options.max_steps) {
      throw ConvergenceError("Krylov propagation exceeded the step limit",
                             local.error_estimate);
    }
    const double beta = w.norm();
    if (beta == 0.0) break;
    const LanczosBasis basis = lanczos(shifted, w, m, breakdown);
    const auto eig = tridiagonal_eigen(basis);
    const int k = basis.steps();
    const Eigen::VectorXd first = eig.eigenvectors().row(0).transpose();
    const Eigen::VectorXd last = eig.eigenvectors().row(k - 1).transpose();
    tau = std::min(tau, 1.0 - done);

    Eigen::VectorXcd y(k);
    double err = 0.0;
    for (int attempt = 0;; ++attempt) {
      const cd step = minus_i_z * tau;
      Eigen::VectorXcd ex(k), ph(k);
      for (int j = 0; j < k; ++j) {
        const cd arg = step * eig.eigenvalues()(j);
        ex(j) = std::exp(arg) * first(j);
        ph(j) = phi1(arg) * first(j);
      }
      y = eig.eigenvectors() * ex;
      if (basis.invariant) {
        err = 0.0;
        break;
      }
      const double residual = basis.beta.back();
      const double est_exp = beta * residual * std::abs(last.dot(ex));
      const double est_phi = beta * residual * std::abs(step) * std::abs(last.dot(ph));
      err = std::max(est_exp, est_phi);
      if (err <= options.tolerance * v_norm * tau || tau < 1e-14) break;
      ++local.rejected;
      tau *= std::clamp(0.9 * std::pow(options.tolerance * v_norm * tau / err, 1.0 / m), 0.1,
                        0.9);
      if (attempt > 200) {
        throw ConvergenceError("Krylov step size collapsed", err);
      }
    }
    w = beta * (basis.vectors * y);
    done += tau;
    local.error_estimate += err;
    if (basis.invariant) {
      tau = 1.0;
    } else if (err > 0.0) {
      tau *= std::clamp(0.9 * std::pow(options.tolerance * v_norm * tau / err, 1.0 / m), 0.2,
                        5.0);
    } else {
      tau *= 5.0;
    }
    if (1.0 - done < 1e-15) break;
  }
  if (stats) *stats = local;
  return w;
}

struct ExtremalEigenvalues {
  double lowest = 0.0;
  double highest = 0.0;
  double residual_lowest = 0.0;
  double residual_highest = 0.0;
  int iterations = 0;
};

/// Extremal Ritz values with residual norms |beta_m e_m^T s|. For Hermitian H
/// each Ritz value has an eigenvalue within its residual.
template <typename Apply>
ExtremalEigenvalues lanczos_extremal(Apply&& apply, Eigen::Index n, double tolerance,
                                     int max_iterations, double norm_estimate,
                                     unsigned seed = 12345u) {
  Eigen::VectorXcd start(n);
  // Deterministic pseudo-random start vector.
  std::uint64_t state = seed;
  for (Eigen::Index i = 0; i < n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double re = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double im = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    start(i) = {re, im};
  }
  const double scale = std::max(norm_estimate, 1.0);
  int steps = std::min<int>(static_cast<int>(std::min<Eigen::Index>(n, 40)), max_iterations);
  for (;;) {
    const LanczosBasis basis = lanczos(apply, start, steps, 1e-13 * scale);
    const auto eig = tridiagonal_eigen(basis);
    const int k = basis.steps();
    ExtremalEigenvalues out;
    out.iterations = k;
    out.lowest = eig.eigenvalues()(0);
    out.highest = eig.eigenvalues()(k - 1);
    const double tail = basis.invariant ? 0.0 : basis.beta.back();
    out.residual_lowest = tail * std::abs(eig.eigenvectors()(k - 1, 0));
    out.residual_highest = tail * std::abs(eig.eigenvectors()(k - 1, k - 1));
    const bool converged = std::max(out.residual_lowest, out.residual_highest) <= tolerance * scale;
    if (converged || basis.invariant) return out;
    if (steps >= max_iterations || steps >= n) {
      throw ConvergenceError("Lanczos extremal eigenvalues did not converge",
                             std::max(out.residual_lowest, out.residual_highest));
    }
    steps = static_cast<int>(std::min<Eigen::Index>({static_cast<Eigen::Index>(steps) * 2, n,
                                                     static_cast<Eigen::Index>(max_iterations)}));
  }
}

}  // namespace twoatom::linalg
