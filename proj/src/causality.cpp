#include "twoatom/causality.hpp"

#include <algorithm>
#include <cmath>

#include "twoatom/errors.hpp"
#include "twoatom/field_model.hpp"

namespace twoatom {

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::excitation_B: return "excitation_B";
    case ObservableKind::exchange: return "exchange";
    case ObservableKind::photon_region: return "photon_region";
  }
  return "unknown";
}

ObservableKind parse_observable(std::string_view text) {
  if (text == "excitation_B") return ObservableKind::excitation_B;
  if (text == "exchange") return ObservableKind::exchange;
  if (text == "photon_region") return ObservableKind::photon_region;
  throw ConfigError("unknown observable '" + std::string(text) + "'");
}

std::string_view to_string(Classification c) {
  return c == Classification::identically_zero ? "identically_zero" : "nonzero_almost_everywhere";
}

BoundedObservable make_observable(const ModelConfig& config, const FockBasis& basis,
                                  ObservableKind kind) {
  switch (kind) {
    case ObservableKind::excitation_B: return excitation_observable_B(basis);
    case ObservableKind::exchange: return exchange_projector(basis);
    case ObservableKind::photon_region:
      return local_photon_observable(basis, build_field_model(config),
                                     config.photon_region_begin, config.photon_region_end);
  }
  throw ConfigError("unknown observable");
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 1 || !(t_max > 0.0) || !std::isfinite(t_max)) {
    throw ConfigError("time grid needs t_max > 0 and at least one step");
  }
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / steps;
  return grid;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty() || grid.front() != 0.0) throw DomainError("time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

}  // namespace

ProbabilitySeries probability_series(const Propagator& propagator, const StateVector& psi0,
                                     const BoundedObservable& o, std::span<const double> grid,
                                     int workers) {
  check_grid(grid);
  ProbabilitySeries series;
  series.times.assign(grid.begin(), grid.end());
  series.observable = o.name();
  const auto states = propagator.evolve_grid(psi0, grid, workers);
  series.values.reserve(states.size());
  for (const auto& psi : states) series.values.push_back(expectation(psi, o));
  return series;
}

ProbabilitySeries probability_series(const ModelConfig& config, ObservableKind kind,
                                     std::span<const double> grid, const SeriesOptions& options) {
  const FockBasis basis = build_basis(config);
  const Propagator propagator(build_hamiltonian(config, basis), options.propagator);
  auto series = probability_series(propagator, prepare_initial_state(basis),
                                   make_observable(config, basis, kind), grid, options.workers);
  series.fingerprint = fingerprint(config);
  return series;
}

std::complex<double> auxiliary_function(const Propagator& propagator, const BoundedObservable& o,
                                        const StateVector& phi, const StateVector& psi0,
                                        std::complex<double> z) {
  if (!(phi.basis == o.basis())) throw DomainError("phi and observable live on different bases");
  const StateVector psi_z = propagator.evolve_complex(psi0, z);
  return phi.amplitudes.dot(o.apply(psi_z.amplitudes));
}

std::complex<double> auxiliary_function(const ModelConfig& config, ObservableKind kind,
                                        const StateVector& phi, std::complex<double> z) {
  const FockBasis basis = build_basis(config);
  const Propagator propagator(build_hamiltonian(config, basis));
  return auxiliary_function(propagator, make_observable(config, basis, kind), phi,
                            prepare_initial_state(basis), z);
}

LogIntegral log_integral(const ProbabilitySeries& series, double floor) {
  if (series.size() == 0) throw DomainError("log_integral needs a nonempty series");
  if (!(floor > 0.0)) throw DomainError("log_integral floor must be positive");
  LogIntegral out;
  out.floor = floor;
  auto sample = [&](std::size_t i) {
    const double p = std::abs(series.values[i]);
    if (p <= floor) ++out.clipped_points;
    const double t = series.times[i];
    return std::log(std::max(p, floor)) / (1.0 + t * t);
  };
  double previous = sample(0);
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double current = sample(i);
    out.value += 0.5 * (series.times[i] - series.times[i - 1]) * (previous + current);
    previous = current;
  }
  out.floor_dominated = out.clipped_points == static_cast<int>(series.size());
  return out;
}

bool DichotomyReport::all_candidates_isolated() const {
  return std::all_of(candidates.begin(), candidates.end(),
                     [](const ZeroCandidate& c) { return c.isolated; });
}

DichotomyReport dichotomy_scan(const ProbabilitySeries& series, double epsilon, double floor) {
  DichotomyReport report;
  report.epsilon = epsilon;
  const std::size_t n = series.size();
  auto is_zero = [&](std::size_t i) { return std::abs(series.values[i]) < epsilon; };

  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_zero(i)) {
      all_zero = false;
      continue;
    }
    ZeroCandidate c;
    c.index = i;
    c.time = series.times[i];
    c.value = series.values[i];
    c.isolated = true;
    if (i > 0) {
      c.left = series.values[i - 1];
      c.isolated = c.isolated && !is_zero(i - 1);
    }
    if (i + 1 < n) {
      c.right = series.values[i + 1];
      c.isolated = c.isolated && !is_zero(i + 1);
    }
    report.candidates.push_back(c);
  }
  report.classification =
      all_zero ? Classification::identically_zero : Classification::nonzero_almost_everywhere;

  for (std::size_t i = 0; i < n;) {
    if (!is_zero(i)) {
      ++i;
      continue;
    }
    ZeroRun run{i, i};
    while (run.last + 1 < n && is_zero(run.last + 1)) ++run.last;
    if (run.first == 0) {
      report.leading_run = run;
    } else if (run.last + 1 < n && run.length() >= 3) {
      report.interior_plateaus.push_back(run);
    }
    i = run.last + 1;
  }
  if (n > 0) report.log_integral = log_integral(series, floor);
  return report;
}

ProbabilitySeries weak_causality_difference(const ModelConfig& config,
                                            std::span<const double> grid,
                                            const SeriesOptions& options) {
  check_grid(grid);
  ModelConfig without = config;
  without.coupling_scale_A = 0.0;
  const FockBasis basis = build_basis(config);
  const StateVector psi0 = prepare_initial_state(basis);
  const BoundedObservable o = excitation_observable_B(basis);

  const Propagator with_a(build_hamiltonian(config, basis), options.propagator);
  const Propagator without_a(build_hamiltonian(without, basis), options.propagator);
  const auto p_with = probability_series(with_a, psi0, o, grid, options.workers);
  const auto p_without = probability_series(without_a, psi0, o, grid, options.workers);

  ProbabilitySeries delta;
  delta.times = p_with.times;
  delta.observable = "delta_excitation_B";
  delta.fingerprint = fingerprint(config);
  delta.signed_values = true;
  delta.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    delta.values[i] = p_with.values[i] - p_without.values[i];
  }
  return delta;
}

FrontEstimate detect_front(const ProbabilitySeries& series, double threshold_fraction) {
  if (!(threshold_fraction > 0.0) || threshold_fraction > 1.0) {
    throw DomainError("threshold fraction must lie in (0, 1]");
  }
  FrontEstimate out;
  for (double v : series.values) out.max_abs = std::max(out.max_abs, std::abs(v));
  if (out.max_abs == 0.0) return out;
  out.threshold = threshold_fraction * out.max_abs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (std::abs(series.values[i]) >= out.threshold) {
      out.found = true;
      out.index = i;
      out.arrival = series.times[i];
      if (i > 0) {
        out.uncertainty = series.times[i] - series.times[i - 1];
      } else if (series.size() > 1) {
        out.uncertainty = series.times[1] - series.times[0];
      }
      break;
    }
  }
  return out;
}

CutoffSweep cutoff_sweep(const ModelConfig& config, std::span<const double> cutoffs,
                         std::span<const double> grid, ObservableKind kind,
                         const SeriesOptions& options, double floor) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < cutoffs[i - 1]) throw DomainError("cutoff list must be non-decreasing");
  }
  CutoffSweep sweep;
  const double r = config.separation();
  for (double cutoff : cutoffs) {
    CutoffRow row;
    row.cutoff = cutoff;
    try {
      ModelConfig c = config;
      c.cutoff = cutoff;
      const FockBasis basis = build_basis(c);
      row.modes = basis.modes();
      row.dimension = basis.dimension();
      const Propagator propagator(build_hamiltonian(c, basis), options.propagator);
      row.method = to_string(propagator.method());
      const auto series = probability_series(propagator, prepare_initial_state(basis),
                                             make_observable(c, basis, kind), grid,
                                             options.workers);
      for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.times[i] < r) row.max_acausal = std::max(row.max_acausal, series.values[i]);
      }
      row.log_integral = log_integral(series, floor);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    sweep.rows.push_back(std::move(row));
  }

  std::vector<double> values;
  for (const auto& row : sweep.rows) {
    if (row.ok) values.push_back(row.max_acausal);
  }
  if (values.size() < 2) {
    sweep.trend = "insufficient_data";
  } else {
    bool up = true, down = true, flat = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
      up = up && values[i] >= values[i - 1];
      down = down && values[i] <= values[i - 1];
      flat = flat && values[i] == values[i - 1];
    }
    sweep.trend = flat ? "constant"
                  : up ? "monotone_increasing"
                  : down ? "monotone_decreasing"
                         : "non_monotone";
  }
  return sweep;
}

}  // namespace twoatom
