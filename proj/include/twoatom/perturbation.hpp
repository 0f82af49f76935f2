#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoatom/config.hpp"

namespace twoatom {

/// Frequency domain of the continuum exchange integral: the physical (0, inf)
/// or its extension to the whole real line.
enum class FrequencyRange { positive_only, extended };

std::string_view to_string(FrequencyRange range);
FrequencyRange parse_frequency_range(std::string_view text);

struct AmplitudeResult {
  std::complex<double> value;
  double error = 0.0;  // achieved absolute error estimate
};

/// K(D, t) = int_0^t (t - s) e^{iDs} ds = (1 + iDt - e^{iDt}) / D^2, entire in D.
std::complex<double> exchange_kernel(double detuning, double t);

/// Second-order amplitude <g_A e_B 0| U_I(t) |e_A g_B 0> in the continuum limit
/// of the box field:
///   A(t) = -(g^2 / 2 pi) int dw w f(w)^2 2 cos(w R) [K(w0 - w, t) + K(-w0 - w, t)],
/// the second kernel only with full coupling. The range runs over [0, cutoff]
/// or [-cutoff, cutoff]; an infinite cutoff is handled with Filon panels and an
/// asymptotic tail. Requires resonant two-level atoms on the box field.
AmplitudeResult second_order_exchange_amplitude(const ModelConfig& config, double t,
                                                FrequencyRange range, double abs_tol = 1e-12);

/// Same amplitude summed over the config's discrete box modes.
std::complex<double> mode_sum_exchange_amplitude(const ModelConfig& config, double t);

struct PerturbativeComparison {
  std::vector<double> times;
  std::vector<double> perturbative;  // |A_modes(t)|^2
  std::vector<double> exact;         // exact exchange probability
  double weak_coupling_parameter = 0.0;  // t_max^2 sum_k g_k^2
  bool weak_coupling_warning = false;
};

/// Weak-coupling bound on t_max^2 sum_k g_k^2 above which a warning is raised.
inline constexpr double weak_coupling_bound = 0.1;

PerturbativeComparison perturbative_vs_exact(const ModelConfig& config,
                                             std::span<const double> times, int workers = 1);

}  // namespace twoatom
