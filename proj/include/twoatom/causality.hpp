#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoatom/config.hpp"
#include "twoatom/fock_basis.hpp"
#include "twoatom/operators.hpp"
#include "twoatom/propagator.hpp"

namespace twoatom {

enum class ObservableKind { excitation_B, exchange, photon_region };

std::string_view to_string(ObservableKind kind);
ObservableKind parse_observable(std::string_view text);

BoundedObservable make_observable(const ModelConfig& config, const FockBasis& basis,
                                  ObservableKind kind);

/// Samples P(t_i) on a strictly increasing grid starting at 0. `values` are
/// probabilities in [0, 1], except for difference series (`signed_values`).
struct ProbabilitySeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string observable;
  std::uint64_t fingerprint = 0;
  bool signed_values = false;

  std::size_t size() const { return times.size(); }
};

/// t_i = i * t_max / steps, i = 0..steps.
std::vector<double> uniform_grid(double t_max, int steps);

struct SeriesOptions {
  PropagatorOptions propagator;
  int workers = 1;
};

/// P(t_i) = <psi_t, O psi_t> with psi_0 = |e_A g_B 0>.
ProbabilitySeries probability_series(const ModelConfig& config, ObservableKind kind,
                                     std::span<const double> grid,
                                     const SeriesOptions& options = {});

/// Same for an arbitrary propagator, observable and initial state.
ProbabilitySeries probability_series(const Propagator& propagator, const StateVector& psi0,
                                     const BoundedObservable& o, std::span<const double> grid,
                                     int workers = 1);

/// F_phi(z) = <phi| O e^{-iHz} |psi_0>, Im z <= 0.
std::complex<double> auxiliary_function(const Propagator& propagator,
                                        const BoundedObservable& o, const StateVector& phi,
                                        const StateVector& psi0, std::complex<double> z);
std::complex<double> auxiliary_function(const ModelConfig& config, ObservableKind kind,
                                        const StateVector& phi, std::complex<double> z);

struct LogIntegral {
  double value = 0.0;
  double floor = 0.0;
  int clipped_points = 0;        // samples with |P| <= floor
  bool floor_dominated = false;  // every sample clipped
};

/// Trapezoid rule for int ln(max(|P(t)|, floor)) / (1 + t^2) dt over the grid.
LogIntegral log_integral(const ProbabilitySeries& series, double floor);

enum class Classification { identically_zero, nonzero_almost_everywhere };
std::string_view to_string(Classification c);

struct ZeroCandidate {
  std::size_t index = 0;
  double time = 0.0;
  double value = 0.0;
  // NaN where the grid ends
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = std::numeric_limits<double>::quiet_NaN();
  bool isolated = false;  // every existing neighbour is >= epsilon
};

/// Consecutive grid points below epsilon, inclusive indices.
struct ZeroRun {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t length() const { return last - first + 1; }
};

struct DichotomyReport {
  Classification classification = Classification::identically_zero;
  std::vector<ZeroCandidate> candidates;
  /// Runs of >= 3 zeros with nonzero values on both sides.
  std::vector<ZeroRun> interior_plateaus;
  /// Zero run starting at the first grid point, if any.
  std::optional<ZeroRun> leading_run;
  LogIntegral log_integral;
  double epsilon = 1e-12;

  bool all_candidates_isolated() const;
};

inline constexpr double default_zero_epsilon = 1e-12;
inline constexpr double default_log_floor = 1e-30;

DichotomyReport dichotomy_scan(const ProbabilitySeries& series,
                               double epsilon = default_zero_epsilon,
                               double floor = default_log_floor);

/// Delta P_B(t) = P_B(with A) - P_B(A decoupled). Both branches share the basis,
/// the observable and psi_0; the second sets coupling_scale_A = 0.
ProbabilitySeries weak_causality_difference(const ModelConfig& config,
                                            std::span<const double> grid,
                                            const SeriesOptions& options = {});

struct FrontEstimate {
  bool found = false;
  double arrival = 0.0;
  double uncertainty = 0.0;  // local grid spacing
  std::size_t index = 0;
  double threshold = 0.0;
  double max_abs = 0.0;
};

inline constexpr double default_front_fraction = 0.01;

/// First t with |value| >= fraction * max |value|; found == false for an all-zero series.
FrontEstimate detect_front(const ProbabilitySeries& series,
                           double threshold_fraction = default_front_fraction);

struct CutoffRow {
  double cutoff = 0.0;
  bool ok = false;
  std::string error;
  int modes = 0;
  Index dimension = 0;
  double max_acausal = 0.0;  // max P over grid points with t < R
  LogIntegral log_integral;
  std::string method;
};

struct CutoffSweep {
  std::vector<CutoffRow> rows;
  /// monotone_increasing, monotone_decreasing, constant, non_monotone or
  /// insufficient_data, over the successful rows.
  std::string trend;
};

/// Reruns the model per cutoff (non-decreasing list); a failing row records its
/// error and the sweep continues.
CutoffSweep cutoff_sweep(const ModelConfig& config, std::span<const double> cutoffs,
                         std::span<const double> grid, ObservableKind kind = ObservableKind::excitation_B,
                         const SeriesOptions& options = {}, double floor = default_log_floor);

}  // namespace twoatom
