#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twoatom/errors.hpp"
#include "twoatom/quadrature.hpp"

using namespace twoatom;
using quad::cd;

namespace {
constexpr cd I{0.0, 1.0};
constexpr double pi = std::numbers::pi;
}  // namespace

TEST_CASE("Gauss-Kronrod on integrals with closed forms") {
  auto poly = [](double x) -> cd { return 3.0 * x * x; };
  CHECK(std::abs(quad::gauss_kronrod(poly, 0.0, 2.0, 1e-13).value - 8.0) < 1e-12);

  auto wave = [](double x) -> cd { return std::exp(I * 5.0 * x); };
  const cd exact = (std::exp(I * 5.0 * 3.0) - 1.0) / (5.0 * I);
  const auto r = quad::gauss_kronrod(wave, 0.0, 3.0, 1e-12);
  CHECK(std::abs(r.value - exact) < 1e-12);
  CHECK(r.error <= 1e-12);

  // integrable endpoint singularity
  auto root = [](double x) -> cd { return 1.0 / std::sqrt(x); };
  CHECK(std::abs(quad::gauss_kronrod(root, 0.0, 1.0, 1e-10).value - 2.0) < 1e-9);

  auto lorentz = [](double x) -> cd { return 1.0 / (1.0 + x * x); };
  CHECK(std::abs(quad::gauss_kronrod(lorentz, -50.0, 50.0, 1e-12).value - 2.0 * std::atan(50.0)) <
        1e-11);
}

TEST_CASE("Gauss-Kronrod reports failure instead of guessing") {
  auto wild = [](double x) -> cd { return 1.0 / x; };
  CHECK_THROWS_AS(quad::gauss_kronrod(wild, 0.0, 1.0, 1e-14, 0.0, 50), ConvergenceError);
}

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  for (int n : {1, 2, 5, 12, 24}) {
    const auto rule = quad::gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    for (int d = 0; d < 2 * n; ++d) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
      const double exact = (d % 2) ? 0.0 : 2.0 / (d + 1);
      CAPTURE(n);
      CAPTURE(d);
      CHECK(std::abs(sum - exact) < 1e-13);
    }
    for (int i = 1; i < n; ++i) CHECK(rule.nodes[i - 1] < rule.nodes[i]);
  }
}

TEST_CASE("Legendre values follow the three-term recurrence") {
  const double x = 0.3;
  const auto p = quad::legendre_values(5, x);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(x));
  CHECK(p[2] == doctest::Approx(0.5 * (3 * x * x - 1)));
  CHECK(p[3] == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)));
  CHECK(p[4] == doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8));
}

TEST_CASE("Filon integrates polynomial amplitudes exactly at any frequency") {
  // int_a^b w e^{iuw} dw by parts
  auto exact = [](double u, double a, double b) {
    auto prim = [u](double w) { return std::exp(I * u * w) * (w / (I * u) + 1.0 / (u * u)); };
    return prim(b) - prim(a);
  };
  auto amplitude = [](double w) -> cd { return w; };
  const auto rule = quad::gauss_legendre(24);
  for (double u : {0.5, 7.0, 300.0}) {
    const auto r = quad::filon_panel(amplitude, u, 1.0, 4.0, rule);
    CAPTURE(u);
    CHECK(std::abs(r.value - exact(u, 1.0, 4.0)) < 1e-12 * std::max(1.0, std::abs(exact(u, 1.0, 4.0))));
  }
}

TEST_CASE("adaptive Filon on a rational amplitude") {
  // int_1^inf e^{iuw} / w^2 dw truncated to [1, 64], against dense Gauss-Kronrod
  const double u = 40.0;
  auto amplitude = [](double w) -> cd { return 1.0 / (w * w); };
  auto full = [&](double w) -> cd { return amplitude(w) * std::exp(I * u * w); };
  const auto f = quad::filon(amplitude, u, 1.0, 64.0, 1e-12);
  const auto g = quad::gauss_kronrod(full, 1.0, 64.0, 1e-13, 0.0, 20000);
  CHECK(std::abs(f.value - g.value) < 1e-11);
  CHECK(f.error <= 1e-12);
  (void)pi;
}
