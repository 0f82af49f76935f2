#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twoatom/config.hpp"

namespace twoatom {

/// Single-particle description of the field the two systems couple to.
///
/// The second-quantized field Hamiltonian is sum_{pq} h_{pq} a_p^dag a_q and
/// system X couples through sum_p c_X(p) sigma_X^+ a_p + h.c. (rotating-wave
/// part); the counter-rotating part is sum_p conj(c_X(p)) sigma_X^+ a_p^dag + h.c.
struct FieldModel {
  FieldKind kind = FieldKind::box_modes;
  Eigen::MatrixXcd single_particle;  // h, Hermitian, modes x modes
  Eigen::VectorXcd coupling_A;       // c_A
  Eigen::VectorXcd coupling_B;       // c_B

  // box_modes: wavenumber and frequency of each retained mode, box length.
  std::vector<double> wavenumbers;
  std::vector<double> frequencies;
  double box_length = 0.0;

  // lattice_chain: site positions.
  std::vector<double> site_positions;

  int modes() const { return static_cast<int>(single_particle.rows()); }
  bool is_diagonal() const { return kind == FieldKind::box_modes; }

  /// Compression of the position-space projector onto [begin, end) to the
  /// retained one-particle space: S_{pq} = <p| 1_region |q>. 0 <= S <= 1.
  Eigen::MatrixXcd region_overlap(double begin, double end) const;
};

/// Smooth high-frequency profile f(u) = exp(-u^2); f == 1 when the cutoff is infinite.
double cutoff_profile(double omega, double cutoff);

/// Per-mode coupling g_k = g sqrt(omega_k / L) f(omega_k / cutoff).
double mode_coupling(double g, double omega, double box_length, double cutoff);

/// Signed integers n of the retained box modes k = 2 pi n / L, n != 0,
/// ordered -M/2..-1, 1..M/2 and filtered by omega_k <= cutoff.
std::vector<int> box_mode_numbers(const ModelConfig& config);

/// Builds the field model (modes, hopping, coupling vectors) for a config.
FieldModel build_field_model(const ModelConfig& config);

}  // namespace twoatom
