#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

namespace twoatom {

enum class CouplingForm { full, rotating_wave };

/// Which single-particle field the atoms talk through.
///   box_modes     - plane waves e^{ikx}/sqrt(L) in a periodic box, omega_k = |k|
///   lattice_chain - open nearest-neighbour hopping chain, atoms on single sites
enum class FieldKind { box_modes, lattice_chain };

/// Full physical specification of a two-system run. Natural units, hbar = c = 1.
struct ModelConfig {
  int levels_A = 2;
  int levels_B = 2;
  double omega_A = 1.0;
  double omega_B = 1.0;
  double x_A = 0.0;
  double x_B = 4.0 * std::numbers::pi;

  FieldKind field_model = FieldKind::box_modes;
  int num_modes = 32;
  double mode_length = 8.0 * std::numbers::pi;

  // Hopping chain. The hopping amplitude is fixed to 1/(2 a) so the maximal
  // group velocity of the band is exactly 1.
  int lattice_sites = 12;
  double lattice_spacing = 1.0;
  double lattice_site_frequency = 1.0;

  double coupling_strength = 0.05;
  CouplingForm coupling_form = CouplingForm::full;
  double coupling_scale_A = 1.0;
  double coupling_scale_B = 1.0;

  int max_photons = 2;
  double cutoff = 8.0;  // may be +inf: no smooth suppression, no filtering

  // Detection window for the local photon observable.
  double photon_region_begin = 2.0 * std::numbers::pi;
  double photon_region_end = 6.0 * std::numbers::pi;

  long long max_dimension = 200000;

  double separation() const { return x_B > x_A ? x_B - x_A : x_A - x_B; }
};

/// Throws ConfigError when an invariant is violated.
void validate(const ModelConfig& config);

/// Parses the flat `key = value` format. Unknown keys, duplicate keys and
/// malformed values are rejected with ConfigError. Missing keys keep defaults.
ModelConfig parse_config(std::string_view text);
ModelConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const ModelConfig& config);

/// 64-bit FNV-1a over the canonical text form.
std::uint64_t fingerprint(const ModelConfig& config);
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);

std::string_view to_string(CouplingForm form);
std::string_view to_string(FieldKind kind);

/// Shortest decimal form that round-trips (17 significant digits).
std::string format_double(double value);

}  // namespace twoatom
