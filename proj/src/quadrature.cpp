#include "twoatom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "twoatom/errors.hpp"

namespace twoatom::quad {

namespace {

// Kronrod abscissae (positive half) and weights; odd indices are the Gauss points.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cd value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cd fc = f(center);
  cd kronrod = fc * wgk[7];
  cd gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const cd sum = f(center - dx) + f(center + dx);
    kronrod += wgk[j] * sum;
    if (j % 2 == 1) gauss += wg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadResult gauss_kronrod(const ComplexIntegrand& f, double a, double b, double abs_tol,
                         double rel_tol, int max_intervals) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  heap.push(kronrod15(f, a, b));
  out.evaluations = 15;
  cd total = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      throw ConvergenceError("adaptive Gauss-Kronrod did not reach its tolerance", error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("adaptive Gauss-Kronrod ran out of resolution", error);
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to drop the drift of the running totals.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = error;
  return out;
}

std::vector<double> legendre_values(int n, double x) {
  std::vector<double> p(static_cast<std::size_t>(std::max(n, 0)));
  if (n > 0) p[0] = 1.0;
  if (n > 1) p[1] = x;
  for (int k = 2; k < n; ++k) {
    p[k] = ((2 * k - 1) * x * p[k - 1] - (k - 1) * p[k - 2]) / k;
  }
  return p;
}

GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 0) p1 = 1.0;
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

QuadResult filon_panel(const ComplexIntegrand& amplitude, double u, double a, double b,
                       const GaussLegendreRule& rule) {
  const int n = static_cast<int>(rule.nodes.size());
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<cd> coeff(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const double x = rule.nodes[static_cast<std::size_t>(k)];
    const cd fx = amplitude(center + half * x) * rule.weights[static_cast<std::size_t>(k)];
    const auto p = legendre_values(n, x);
    for (int j = 0; j < n; ++j) coeff[j] += fx * p[j];
  }
  const double kappa = u * half;
  cd sum = 0.0;
  double tail = 0.0;
  double largest = 0.0;
  cd i_pow = 1.0;
  for (int j = 0; j < n; ++j) {
    coeff[j] *= 0.5 * (2 * j + 1);
    const double bessel =
        kappa == 0.0 ? (j == 0 ? 1.0 : 0.0) : std::sph_bessel(static_cast<unsigned>(j), std::abs(kappa));
    // j_n(-k) = (-1)^n j_n(k)
    const double signed_bessel = (kappa < 0.0 && j % 2 == 1) ? -bessel : bessel;
    const cd term = coeff[j] * 2.0 * i_pow * signed_bessel;
    sum += term;
    if (2 * j >= n) tail += std::abs(coeff[j]) * 2.0;
    largest = std::max(largest, std::abs(coeff[j]));
    i_pow *= cd(0.0, 1.0);
  }
  // coefficients at rounding level carry no information about truncation
  const double noise = 4.0 * n * std::numeric_limits<double>::epsilon() * largest;
  tail = std::max(0.0, tail - n * noise);
  QuadResult out;
  const cd phase = std::exp(cd(0.0, u * center));
  out.value = half * phase * sum;
  out.error = half * tail;
  out.evaluations = n;
  return out;
}

QuadResult filon(const ComplexIntegrand& amplitude, double u, double a, double b, double abs_tol,
                 int max_panels) {
  static const GaussLegendreRule rule = gauss_legendre(24);
  QuadResult out;
  if (a == b) return out;
  struct Pending {
    double a, b;
  };
  std::vector<Pending> stack{{a, b}};
  const double length = b - a;
  int panels = 0;
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const QuadResult r = filon_panel(amplitude, u, p.a, p.b, rule);
    out.evaluations += r.evaluations;
    const double share = abs_tol * (p.b - p.a) / length;
    if (r.error <= share || (p.b - p.a) < 1e-12 * length) {
      out.value += r.value;
      out.error += r.error;
      continue;
    }
    if (++panels > max_panels) {
      throw ConvergenceError("Filon panels did not reach their tolerance", r.error);
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b});
    stack.push_back({p.a, mid});
  }
  return out;
}

}  // namespace twoatom::quad
