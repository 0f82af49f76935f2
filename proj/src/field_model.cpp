#include "twoatom/field_model.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "twoatom/errors.hpp"

namespace twoatom {

using cd = std::complex<double>;

double cutoff_profile(double omega, double cutoff) {
  if (std::isinf(cutoff)) return 1.0;
  const double u = omega / cutoff;
  return std::exp(-u * u);
}

double mode_coupling(double g, double omega, double box_length, double cutoff) {
  return g * std::sqrt(omega / box_length) * cutoff_profile(omega, cutoff);
}

std::vector<int> box_mode_numbers(const ModelConfig& config) {
  const int half_down = config.num_modes / 2;
  const int half_up = config.num_modes - half_down;
  std::vector<int> numbers;
  numbers.reserve(static_cast<std::size_t>(config.num_modes));
  for (int n = -half_down; n <= half_up; ++n) {
    if (n == 0) continue;
    const double omega = 2.0 * std::numbers::pi * std::abs(n) / config.mode_length;
    if (omega <= config.cutoff) numbers.push_back(n);
  }
  return numbers;
}

namespace {

// e^{i 2 pi turns}, exact at quarter turns so that commensurate geometries
// (e.g. R = L/2) produce exactly real couplings.
cd unit_phase(double turns) {
  const double frac = turns - std::floor(turns);
  if (frac == 0.0) return {1.0, 0.0};
  if (frac == 0.25) return {0.0, 1.0};
  if (frac == 0.5) return {-1.0, 0.0};
  if (frac == 0.75) return {0.0, -1.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

}  // namespace

FieldModel build_field_model(const ModelConfig& config) {
  validate(config);
  FieldModel field;
  field.kind = config.field_model;
  const double gA = config.coupling_strength * config.coupling_scale_A;
  const double gB = config.coupling_strength * config.coupling_scale_B;

  if (config.field_model == FieldKind::box_modes) {
    const auto numbers = box_mode_numbers(config);
    if (numbers.empty()) throw ConfigError("cutoff removes every field mode");
    const auto m = static_cast<Eigen::Index>(numbers.size());
    field.box_length = config.mode_length;
    field.single_particle = Eigen::MatrixXcd::Zero(m, m);
    field.coupling_A.resize(m);
    field.coupling_B.resize(m);
    for (Eigen::Index p = 0; p < m; ++p) {
      const int n = numbers[static_cast<std::size_t>(p)];
      const double k = 2.0 * std::numbers::pi * n / config.mode_length;
      const double omega = std::abs(k);
      field.wavenumbers.push_back(k);
      field.frequencies.push_back(omega);
      field.single_particle(p, p) = omega;
      // Dipole phase e^{+ik x} on the annihilator.
      field.coupling_A(p) = mode_coupling(gA, omega, config.mode_length, config.cutoff) *
                            unit_phase(n * (config.x_A / config.mode_length));
      field.coupling_B(p) = mode_coupling(gB, omega, config.mode_length, config.cutoff) *
                            unit_phase(n * (config.x_B / config.mode_length));
    }
    return field;
  }

  const Eigen::Index m = config.lattice_sites;
  const double hopping = 1.0 / (2.0 * config.lattice_spacing);
  field.single_particle = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index p = 0; p < m; ++p) {
    field.single_particle(p, p) = config.lattice_site_frequency;
    if (p + 1 < m) {
      field.single_particle(p, p + 1) = -hopping;
      field.single_particle(p + 1, p) = -hopping;
    }
    field.site_positions.push_back(static_cast<double>(p) * config.lattice_spacing);
  }
  field.coupling_A = Eigen::VectorXcd::Zero(m);
  field.coupling_B = Eigen::VectorXcd::Zero(m);
  field.coupling_A(std::lround(config.x_A / config.lattice_spacing)) = gA;
  field.coupling_B(std::lround(config.x_B / config.lattice_spacing)) = gB;
  return field;
}

Eigen::MatrixXcd FieldModel::region_overlap(double begin, double end) const {
  if (!(end > begin)) throw DomainError("photon detection region is empty");
  const Eigen::Index m = modes();
  Eigen::MatrixXcd overlap = Eigen::MatrixXcd::Zero(m, m);
  if (kind == FieldKind::lattice_chain) {
    for (Eigen::Index p = 0; p < m; ++p) {
      const double x = site_positions[static_cast<std::size_t>(p)];
      if (x >= begin && x < end) overlap(p, p) = 1.0;
    }
    return overlap;
  }
  if (begin < 0.0 || end > box_length) {
    throw DomainError("photon detection region must lie inside the box");
  }
  // (1/L) int_begin^end e^{-i k_p x} e^{i k_q x} dx
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index q = 0; q < m; ++q) {
      const double dk = wavenumbers[static_cast<std::size_t>(q)] -
                        wavenumbers[static_cast<std::size_t>(p)];
      if (p == q) {
        overlap(p, q) = (end - begin) / box_length;
      } else {
        overlap(p, q) = (std::polar(1.0, dk * end) - std::polar(1.0, dk * begin)) /
                        (cd(0.0, dk) * box_length);
      }
    }
  }
  // Exact Hermitian symmetry.
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index q = p + 1; q < m; ++q) overlap(q, p) = std::conj(overlap(p, q));
  }
  return overlap;
}

}  // namespace twoatom
