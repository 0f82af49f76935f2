#include "twoatom/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twoatom/causality.hpp"
#include "twoatom/errors.hpp"
#include "twoatom/perturbation.hpp"
#include "twoatom/report_io.hpp"

namespace twoatom {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string grid;
  std::string observable = "excitation_B";
  std::string range = "both";
  std::string method = "automatic";
  std::string cutoffs = "4,8,16,32";
  std::string dump_hamiltonian;
  int workers = 1;
  double epsilon = default_zero_epsilon;
  double threshold_fraction = default_front_fraction;
};

struct Grid {
  double t_max = 0.0;
  int steps = 0;
  std::vector<double> times;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what);
  return out;
}

// "t_max,steps"; t_max defaults to R and steps to the given default.
Grid parse_grid(const std::string& text, double separation, int default_steps) {
  Grid g{separation, default_steps, {}};
  if (!text.empty()) {
    const auto values = parse_list(text, "grid");
    if (values.size() != 2 || values[1] != std::floor(values[1]) || values[1] < 1) {
      throw ConfigError("grid must be \"t_max,steps\" with an integer step count");
    }
    g.t_max = values[0];
    g.steps = static_cast<int>(values[1]);
  }
  g.times = uniform_grid(g.t_max, g.steps);
  return g;
}

PropagationMethod parse_method(const std::string& text) {
  if (text == "automatic") return PropagationMethod::automatic;
  if (text == "dense") return PropagationMethod::dense;
  if (text == "krylov") return PropagationMethod::krylov;
  throw ConfigError("unknown method '" + text + "'");
}

ModelConfig read_config(const Options& o) {
  return o.config_path.empty() ? ModelConfig{} : load_config(o.config_path);
}

SeriesOptions series_options(const Options& o) {
  if (o.workers < 1) throw ConfigError("workers must be at least 1");
  SeriesOptions s;
  s.propagator.method = parse_method(o.method);
  s.workers = o.workers;
  return s;
}

ordered_json manifest(const std::string& subcommand, const ModelConfig& config, const Grid& grid,
                      const Options& o) {
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["subcommand"] = subcommand;
  j["fingerprint"] = hex_fingerprint(fingerprint(config));
  j["config"] = to_config_text(config);
  j["grid"] = {{"t_max", grid.t_max}, {"steps", grid.steps}};
  j["method"] = o.method;
  j["krylov_tolerance"] = linalg::KrylovOptions{}.tolerance;
  return j;
}

ordered_json log_integral_json(const LogIntegral& l) {
  return {{"floor", l.floor},
          {"value", l.value},
          {"clipped_points", l.clipped_points},
          {"floor_dominated", l.floor_dominated}};
}

ordered_json dichotomy_json(const DichotomyReport& r) {
  ordered_json j;
  j["classification"] = to_string(r.classification);
  j["epsilon_zero"] = r.epsilon;
  j["all_candidates_isolated"] = r.all_candidates_isolated();
  ordered_json candidates = ordered_json::array();
  for (const auto& c : r.candidates) {
    candidates.push_back({{"index", c.index},
                          {"t", c.time},
                          {"value", c.value},
                          {"left", std::isnan(c.left) ? ordered_json() : ordered_json(c.left)},
                          {"right", std::isnan(c.right) ? ordered_json() : ordered_json(c.right)},
                          {"isolated", c.isolated}});
  }
  j["zero_candidates"] = candidates;
  ordered_json plateaus = ordered_json::array();
  for (const auto& p : r.interior_plateaus) plateaus.push_back({p.first, p.last});
  j["interior_plateaus"] = plateaus;
  j["leading_zero_run"] =
      r.leading_run ? ordered_json{r.leading_run->first, r.leading_run->last} : ordered_json();
  j["log_integral"] = log_integral_json(r.log_integral);
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_simulate(const Options& o, bool dichotomy) {
  const ModelConfig config = read_config(o);
  const Grid grid = parse_grid(o.grid, config.separation(), 400);
  const ObservableKind kind = parse_observable(o.observable);
  const SeriesOptions opts = series_options(o);

  const FockBasis basis = build_basis(config);
  const HermitianOperator h = build_hamiltonian(config, basis);
  const Propagator propagator(h, opts.propagator);
  auto series = probability_series(propagator, prepare_initial_state(basis),
                                   make_observable(config, basis, kind), grid.times, opts.workers);
  series.fingerprint = fingerprint(config);
  const DichotomyReport report = dichotomy_scan(series, o.epsilon);

  const std::string name = dichotomy ? "dichotomy" : "simulate";
  ordered_json j = manifest(name, config, grid, o);
  j["observable"] = to_string(kind);
  j["dimension"] = basis.dimension();
  j["modes"] = basis.modes();
  j["propagation"] = to_string(propagator.method());
  double max_value = 0.0;
  for (double v : series.values) max_value = std::max(max_value, v);
  j["max_value"] = max_value;
  if (dichotomy) {
    j["dichotomy"] = dichotomy_json(report);
    ordered_json floors = ordered_json::array();
    for (double f : {1e-30, 1e-40}) floors.push_back(log_integral_json(log_integral(series, f)));
    j["log_integral_floors"] = floors;
  } else {
    j["classification"] = to_string(report.classification);
    j["log_integral"] = log_integral_json(report.log_integral);
  }

  OutputSet out(o.out_dir);
  out.add(name + ".csv", series_csv(series, "probability"));
  out.add(name + ".json", dump(j));
  if (!o.dump_hamiltonian.empty()) {
    std::ostringstream triplets;
    write_triplets(triplets, h);
    out.add(o.dump_hamiltonian, triplets.str());
  }
  for (const auto& p : out.commit()) std::cout << p.string() << '\n';
  return exit_ok;
}

int cmd_weak_causality(const Options& o) {
  const ModelConfig config = read_config(o);
  const Grid grid = parse_grid(o.grid, 2.0 * config.separation(), 400);
  const auto delta = weak_causality_difference(config, grid.times, series_options(o));
  const FrontEstimate front = detect_front(delta, o.threshold_fraction);
  const double r = config.separation();

  double early = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta.times[i] < 0.9 * r) early = std::max(early, std::abs(delta.values[i]));
  }
  ordered_json j = manifest("weak-causality", config, grid, o);
  j["separation"] = r;
  j["threshold_fraction"] = o.threshold_fraction;
  j["front_found"] = front.found;
  j["arrival_time"] = front.found ? ordered_json(front.arrival) : ordered_json();
  j["arrival_uncertainty"] = front.found ? ordered_json(front.uncertainty) : ordered_json();
  j["max_abs_delta"] = front.max_abs;
  j["max_abs_delta_before_0.9R"] = early;

  OutputSet out(o.out_dir);
  out.add("weak_causality.csv", series_csv(delta, "delta_p"));
  out.add("weak_causality.json", dump(j));
  for (const auto& p : out.commit()) std::cout << p.string() << '\n';
  return exit_ok;
}

int cmd_fermi_integral(const Options& o) {
  const ModelConfig config = read_config(o);
  const double r = config.separation();
  const Grid grid = parse_grid(o.grid, r, 200);
  std::vector<FrequencyRange> ranges;
  if (o.range == "both") {
    ranges = {FrequencyRange::positive_only, FrequencyRange::extended};
  } else {
    ranges = {parse_frequency_range(o.range)};
  }

  // preconditions fail here, before any point could be mislabelled as divergent
  second_order_exchange_amplitude(config, 0.0, ranges.front());

  std::ostringstream csv;
  csv << "t,range,abs_amplitude_squared,error_estimate,status\n";
  ordered_json j = manifest("fermi-integral", config, grid, o);
  j["separation"] = r;
  ordered_json summary = ordered_json::object();
  for (FrequencyRange range : ranges) {
    double max_before = 0.0;
    int failed = 0;
    for (double t : grid.times) {
      std::string status = "ok";
      double value = std::nan("");
      double error = std::nan("");
      try {
        const auto a = second_order_exchange_amplitude(config, t, range);
        value = std::norm(a.value);
        error = a.error;
        if (t < r) max_before = std::max(max_before, std::abs(a.value));
      } catch (const DomainError&) {
        // the point-dipole integral diverges on the light cone itself
        status = "divergent";
        ++failed;
      }
      csv << format_double(t) << ',' << to_string(range) << ',' << format_double(value) << ','
          << format_double(error) << ',' << status << '\n';
    }
    summary[std::string(to_string(range))] = {{"max_abs_amplitude_before_R", max_before},
                                              {"divergent_points", failed}};
  }
  j["ranges"] = summary;

  OutputSet out(o.out_dir);
  out.add("fermi_integral.csv", csv.str());
  out.add("fermi_integral.json", dump(j));
  for (const auto& p : out.commit()) std::cout << p.string() << '\n';
  return exit_ok;
}

int cmd_cutoff_sweep(const Options& o) {
  const ModelConfig config = read_config(o);
  const Grid grid = parse_grid(o.grid, config.separation(), 200);
  std::vector<double> cutoffs = parse_list(o.cutoffs, "cutoff list");
  // listed in units of omega_A
  for (double& c : cutoffs) c *= config.omega_A;
  const auto sweep = cutoff_sweep(config, cutoffs, grid.times, parse_observable(o.observable),
                                  series_options(o));

  std::ostringstream csv;
  csv << "cutoff,status,modes,dimension,method,max_acausal,log_integral,floor_dominated,error\n";
  ordered_json rows = ordered_json::array();
  for (const auto& row : sweep.rows) {
    std::string message = row.error;
    for (char& ch : message) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    csv << format_double(row.cutoff) << ',' << (row.ok ? "ok" : "error") << ',' << row.modes << ','
        << row.dimension << ',' << row.method << ',' << format_double(row.max_acausal) << ','
        << format_double(row.log_integral.value) << ',' << (row.log_integral.floor_dominated ? 1 : 0)
        << ',' << message << '\n';
    rows.push_back({{"cutoff", row.cutoff},
                    {"status", row.ok ? "ok" : "error"},
                    {"modes", row.modes},
                    {"dimension", row.dimension},
                    {"method", row.method},
                    {"max_acausal", row.max_acausal},
                    {"log_integral", log_integral_json(row.log_integral)},
                    {"error", row.error}});
  }
  ordered_json j = manifest("cutoff-sweep", config, grid, o);
  j["observable"] = o.observable;
  j["rows"] = rows;
  j["trend"] = sweep.trend;

  OutputSet out(o.out_dir);
  out.add("cutoff_sweep.csv", csv.str());
  out.add("cutoff_sweep.json", dump(j));
  for (const auto& p : out.commit()) std::cout << p.string() << '\n';
  return exit_ok;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "model config file (key = value)")
      ->envname("TWOATOM_CONFIG");
  sub->add_option("--out", o.out_dir, "output directory")->envname("TWOATOM_OUT");
  sub->add_option("--grid", o.grid, "time grid \"t_max,steps\"")->envname("TWOATOM_GRID");
  sub->add_option("--workers", o.workers, "worker threads")->envname("TWOATOM_WORKERS");
  sub->add_option("--method", o.method, "automatic, dense or krylov")->envname("TWOATOM_METHOD");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Two-atom causality laboratory"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "probability series for one observable");
  auto* dichotomy = app.add_subcommand("dichotomy", "series plus zero-set classification");
  auto* weak = app.add_subcommand("weak-causality", "with-A minus without-A difference and front");
  auto* fermi = app.add_subcommand("fermi-integral", "second-order exchange amplitude");
  auto* sweep = app.add_subcommand("cutoff-sweep", "acausal window versus cutoff");
  for (auto* sub : {simulate, dichotomy, weak, fermi, sweep}) add_common(sub, o);
  for (auto* sub : {simulate, dichotomy, sweep}) {
    sub->add_option("--observable", o.observable, "excitation_B, exchange or photon_region")
        ->envname("TWOATOM_OBSERVABLE");
  }
  simulate->add_option("--dump-hamiltonian", o.dump_hamiltonian,
                       "also write H as sparse triplets to this file name");
  dichotomy->add_option("--epsilon", o.epsilon, "zero threshold");
  weak->add_option("--threshold-fraction", o.threshold_fraction, "front threshold fraction");
  fermi->add_option("--range", o.range, "positive_only, extended or both")
      ->envname("TWOATOM_RANGE");
  sweep->add_option("--cutoffs", o.cutoffs, "comma separated cutoffs in units of omega_A")
      ->envname("TWOATOM_CUTOFFS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*simulate) return cmd_simulate(o, false);
    if (*dichotomy) return cmd_simulate(o, true);
    if (*weak) return cmd_weak_causality(o);
    if (*fermi) return cmd_fermi_integral(o);
    if (*sweep) return cmd_cutoff_sweep(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DimensionOverflow& e) {
    std::cerr << "dimension overflow: " << e.what() << '\n';
    return exit_dimension;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << " (residual " << e.residual() << ")\n";
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_failure;
}

}  // namespace twoatom
