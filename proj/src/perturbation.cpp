#include "twoatom/perturbation.hpp"

#include <cmath>
#include <numbers>

#include "twoatom/errors.hpp"
#include "twoatom/field_model.hpp"
#include "twoatom/fock_basis.hpp"
#include "twoatom/operators.hpp"
#include "twoatom/propagator.hpp"
#include "twoatom/quadrature.hpp"

namespace twoatom {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void check_model(const ModelConfig& config) {
  validate(config);
  if (config.field_model != FieldKind::box_modes) {
    throw DomainError("the exchange amplitude is defined for the box field only");
  }
  if (config.levels_A != 2 || config.levels_B != 2) {
    throw DomainError("the exchange amplitude needs two-level atoms");
  }
  if (config.omega_A != config.omega_B) {
    throw DomainError("the exchange amplitude needs resonant atoms (omega_A == omega_B)");
  }
}

// a(w) = alpha + beta / s + gamma / s^2 with s = sign * v - c, as a function of v.
struct Rational {
  cd alpha, beta, gamma;
  double c;
  double sign;

  cd operator()(double v) const {
    const double s = sign * v - c;
    return alpha + beta / s + gamma / (s * s);
  }
  // n-th derivative in v, n >= 1.
  cd derivative(int n, double v) const {
    const double s = sign * v - c;
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double sgn = ((n % 2) ? -1.0 : 1.0) * std::pow(sign, n);
    return sgn * (beta * (fact / std::pow(s, n + 1)) + gamma * (fact * (n + 1) / std::pow(s, n + 2)));
  }
};

// int_W^inf a(v) e^{iuv} dv (Abel sense) by integration by parts, truncated at
// the smallest term.
cd asymptotic_tail(const Rational& a, double u, double w, double tol, double* error) {
  const cd iu = I * u;
  cd sum = a(w) / iu;
  cd power = iu;
  double previous = std::abs(sum);
  for (int n = 1; n < 200; ++n) {
    power *= iu;
    const cd term = ((n % 2) ? -1.0 : 1.0) * a.derivative(n, w) / power;
    const double size = std::abs(term);
    if (size > previous) break;
    sum += term;
    previous = size;
    if (size < tol * 1e-3) break;
  }
  if (error) *error += previous;
  return -std::exp(iu * w) * sum;
}

// int_{w0}^{inf} a(v) e^{iuv} dv: Filon panels up to W, then the asymptotic tail.
quad::QuadResult oscillatory_tail(const Rational& a, double u, double w0, double tol) {
  if (u == 0.0) {
    throw DomainError("exchange integral diverges at t = R (non-oscillatory 1/w tail)");
  }
  const double w = std::max(w0, std::abs(a.c) + 40.0 / std::abs(u));
  quad::QuadResult out;
  if (w > w0) {
    // geometric panels keep the Legendre expansion of 1/s well conditioned
    double left = w0;
    while (left < w) {
      const double right = std::min(w, 2.0 * left);
      const auto r = quad::filon(a, u, left, right, 0.5 * tol * (right - left) / (w - w0));
      out.value += r.value;
      out.error += r.error;
      out.evaluations += r.evaluations;
      left = right;
    }
  }
  out.value += asymptotic_tail(a, u, w, 0.5 * tol, &out.error);
  return out;
}

double prefactor(const ModelConfig& config) {
  return config.coupling_strength * config.coupling_strength / (2.0 * std::numbers::pi);
}

}  // namespace

std::string_view to_string(FrequencyRange range) {
  return range == FrequencyRange::extended ? "extended" : "positive_only";
}

FrequencyRange parse_frequency_range(std::string_view text) {
  if (text == "extended") return FrequencyRange::extended;
  if (text == "positive_only") return FrequencyRange::positive_only;
  throw ConfigError("unknown frequency range '" + std::string(text) + "'");
}

cd exchange_kernel(double detuning, double t) {
  const double x = detuning * t;
  if (std::abs(x) < 0.1) {
    // t^2 sum_n (ix)^n / (n+2)!
    cd term = 0.5;
    cd sum = term;
    for (int n = 1; n < 14; ++n) {
      term *= I * x / static_cast<double>(n + 2);
      sum += term;
    }
    return t * t * sum;
  }
  return (1.0 + I * x - std::exp(I * x)) / (detuning * detuning);
}

AmplitudeResult second_order_exchange_amplitude(const ModelConfig& config, double t,
                                                FrequencyRange range, double abs_tol) {
  check_model(config);
  if (t < 0.0) throw DomainError("time must be nonnegative");
  AmplitudeResult out{0.0, 0.0};
  const double pref = prefactor(config);
  if (pref == 0.0 || t == 0.0) return out;

  const double w0 = config.omega_A;
  const double r = config.separation();
  const double lambda = config.cutoff;
  const bool full = config.coupling_form == CouplingForm::full;
  const bool extended = range == FrequencyRange::extended;
  const double tol = abs_tol / pref;

  auto integrand = [&](double w) -> cd {
    const double f = cutoff_profile(std::abs(w), lambda);
    cd k = exchange_kernel(w0 - w, t);
    if (full) k += exchange_kernel(-w0 - w, t);
    return w * f * f * 2.0 * std::cos(w * r) * k;
  };

  if (!std::isinf(lambda)) {
    // Modes above the cutoff are filtered out of the model, so the continuum stops there too.
    const auto q = quad::gauss_kronrod(integrand, extended ? -lambda : 0.0, lambda, tol);
    out.value = -pref * q.value;
    out.error = pref * q.error;
    return out;
  }

  const double core = 2.0 * w0 + 2.0;
  const int pieces = (extended ? 2 : 1) * (full ? 2 : 1) * 4 + 1;
  const double share = tol / pieces;
  const auto center = quad::gauss_kronrod(integrand, extended ? -core : 0.0, core, share);
  cd total = center.value;
  double error = center.error;

  // Beyond the core, w K(c - w, t) = [-it + (1 - ict)/s + c/s^2] - e^{ict}(1/s + c/s^2) e^{-iwt},
  // s = w - c, each multiplied by e^{+-iwR}.
  std::vector<double> paths{w0};
  if (full) paths.push_back(-w0);
  for (double c : paths) {
    const cd rotate = std::exp(I * c * t);
    for (double sign : {1.0, -1.0}) {
      if (sign < 0.0 && !extended) continue;
      // upper tail (sign = +1) is w in [core, inf); lower tail substitutes w = -v.
      const Rational steady{-I * t, 1.0 - I * c * t, c, c, sign};
      const Rational moving{0.0, -rotate, -rotate * c, c, sign};
      for (double sigma : {1.0, -1.0}) {
        const auto a = oscillatory_tail(steady, sign * sigma * r, core, share);
        const auto b = oscillatory_tail(moving, sign * (sigma * r - t), core, share);
        total += a.value + b.value;
        error += a.error + b.error;
      }
    }
  }
  out.value = -pref * total;
  out.error = pref * error;
  if (out.error > 10.0 * abs_tol) {
    throw ConvergenceError("exchange amplitude quadrature missed its tolerance", out.error);
  }
  return out;
}

cd mode_sum_exchange_amplitude(const ModelConfig& config, double t) {
  check_model(config);
  const FieldModel field = build_field_model(config);
  const bool full = config.coupling_form == CouplingForm::full;
  const double w0 = config.omega_A;
  cd sum = 0.0;
  for (int p = 0; p < field.modes(); ++p) {
    // A emits and B absorbs: conj(c_A) c_B = g_k^2 e^{ik(x_B - x_A)}.
    // Counter-rotating: B emits first, A absorbs: conj(c_B) c_A.
    const cd forward = field.coupling_B(p) * std::conj(field.coupling_A(p));
    const double w = field.frequencies[static_cast<std::size_t>(p)];
    sum += forward * exchange_kernel(w0 - w, t);
    if (full) sum += std::conj(forward) * exchange_kernel(-w0 - w, t);
  }
  return -sum;
}

PerturbativeComparison perturbative_vs_exact(const ModelConfig& config,
                                             std::span<const double> times, int workers) {
  check_model(config);
  PerturbativeComparison out;
  out.times.assign(times.begin(), times.end());
  const FieldModel field = build_field_model(config);
  double coupling_sum = 0.0;
  for (int p = 0; p < field.modes(); ++p) {
    coupling_sum += std::max(std::norm(field.coupling_A(p)), std::norm(field.coupling_B(p)));
  }
  const double t_max = times.empty() ? 0.0 : times.back();
  out.weak_coupling_parameter = t_max * t_max * coupling_sum;
  out.weak_coupling_warning = out.weak_coupling_parameter > weak_coupling_bound;

  const FockBasis basis = build_basis(config);
  const Propagator propagator(build_hamiltonian(config, basis));
  const auto states = propagator.evolve_grid(prepare_initial_state(basis), times, workers);
  const BoundedObservable exchange = exchange_projector(basis);
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.perturbative.push_back(std::norm(mode_sum_exchange_amplitude(config, times[i])));
    out.exact.push_back(expectation(states[i], exchange));
  }
  return out;
}

}  // namespace twoatom
