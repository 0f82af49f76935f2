#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace twoatom::quad {

using cd = std::complex<double>;
using ComplexIntegrand = std::function<cd(double)>;

struct QuadResult {
  cd value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Stops when the summed
/// error estimate is below max(abs_tol, rel_tol * |I|); throws
/// ConvergenceError with the achieved estimate after max_intervals.
QuadResult gauss_kronrod(const ComplexIntegrand& f, double a, double b, double abs_tol,
                         double rel_tol = 0.0, int max_intervals = 5000);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], increasing
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// P_0(x) ... P_{n-1}(x).
std::vector<double> legendre_values(int n, double x);

/// Filon-Legendre rule for the panel integral of a(w) e^{i u w} over [a, b],
/// a smooth and non-oscillatory: a is projected on Legendre polynomials and
/// each term integrated exactly, using int_{-1}^{1} P_n(x) e^{i k x} dx = 2 i^n j_n(k).
/// The magnitude of the upper half of the coefficients is the error estimate.
QuadResult filon_panel(const ComplexIntegrand& amplitude, double u, double a, double b,
                       const GaussLegendreRule& rule);

/// Filon panels on [a, b], bisecting until every panel meets its share of abs_tol.
QuadResult filon(const ComplexIntegrand& amplitude, double u, double a, double b, double abs_tol,
                 int max_panels = 4000);

}  // namespace twoatom::quad
