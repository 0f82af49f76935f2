#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "twoatom/causality.hpp"
#include "twoatom/errors.hpp"

using namespace twoatom;
using testing_support::cd;

namespace {

ProbabilitySeries synthetic(std::vector<double> values, double dt = 1.0) {
  ProbabilitySeries s;
  for (std::size_t i = 0; i < values.size(); ++i) s.times.push_back(dt * i);
  s.values = std::move(values);
  s.observable = "synthetic";
  return s;
}

}  // namespace

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(2.0, 4);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 2.0);
  CHECK(g[1] == 0.5);
}

TEST_CASE("g = 0 leaves B in its ground state") {
  ModelConfig c = testing_support::small_box(4);
  c.coupling_strength = 0.0;
  const auto grid = uniform_grid(c.separation(), 50);
  for (auto kind : {ObservableKind::excitation_B, ObservableKind::exchange}) {
    const auto s = probability_series(c, kind, grid);
    for (double v : s.values) CHECK(v < 1e-15);
    const auto report = dichotomy_scan(s);
    CHECK(report.classification == Classification::identically_zero);
    CHECK(report.log_integral.floor_dominated);
  }
}

TEST_CASE("coupled box: P_B leaves zero at once") {
  const ModelConfig c = testing_support::small_box(8);
  const double r = c.separation();
  const auto grid = uniform_grid(r, 400);
  const auto s = probability_series(c, ObservableKind::excitation_B, grid);
  CHECK(s.values[0] == 0.0);
  CHECK(s.values[1] > 1e-12);
  CHECK(s.fingerprint == fingerprint(c));
  const auto report = dichotomy_scan(s);
  CHECK(report.classification == Classification::nonzero_almost_everywhere);
  REQUIRE(report.leading_run);
  CHECK(report.leading_run->length() == 1);
  CHECK(report.interior_plateaus.empty());
  for (double v : s.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("probability series rejects bad grids") {
  const ModelConfig c = testing_support::small_box(2);
  const std::vector<double> late{0.5, 1.0};
  const std::vector<double> flat{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(probability_series(c, ObservableKind::exchange, late), DomainError);
  CHECK_THROWS_AS(probability_series(c, ObservableKind::exchange, flat), DomainError);
}

TEST_CASE("log integral") {
  SUBCASE("constant series approaches ln(c) atan(T)") {
    const double c = 0.25;
    auto s = synthetic(std::vector<double>(20001, c), 1e-3);
    const auto li = log_integral(s, 1e-30);
    CHECK(li.value == doctest::Approx(std::log(c) * std::atan(20.0)).epsilon(1e-6));
    CHECK(li.clipped_points == 0);
    CHECK(!li.floor_dominated);
  }
  SUBCASE("all zeros sit on the floor") {
    auto s = synthetic(std::vector<double>(11, 0.0));
    const auto a = log_integral(s, 1e-30);
    const auto b = log_integral(s, 1e-40);
    CHECK(a.floor_dominated);
    CHECK(a.clipped_points == 11);
    CHECK(b.value / a.value == doctest::Approx(40.0 / 30.0));
  }
  SUBCASE("signed values enter through their magnitude") {
    auto plus = synthetic({0.1, 0.2, 0.3});
    auto minus = synthetic({-0.1, 0.2, -0.3});
    CHECK(log_integral(plus, 1e-30).value == log_integral(minus, 1e-30).value);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(log_integral(synthetic({}), 1e-30), DomainError);
    CHECK_THROWS_AS(log_integral(synthetic({1.0}), 0.0), DomainError);
  }
}

TEST_CASE("dichotomy scan on synthetic series") {
  SUBCASE("isolated zeros of an oscillation") {
    // sin^2 sampled so that some points land exactly on its zeros
    std::vector<double> v;
    for (int i = 0; i <= 40; ++i) v.push_back(std::pow(std::sin(std::numbers::pi * i / 10.0), 2));
    for (int i = 0; i <= 40; i += 10) v[i] = 0.0;
    const auto r = dichotomy_scan(synthetic(v));
    CHECK(r.classification == Classification::nonzero_almost_everywhere);
    CHECK(r.candidates.size() == 5);
    CHECK(r.all_candidates_isolated());
    CHECK(r.interior_plateaus.empty());
    CHECK(std::isnan(r.candidates.front().left));
    CHECK(std::isnan(r.candidates.back().right));
  }
  SUBCASE("an interior plateau is reported") {
    const auto r = dichotomy_scan(synthetic({0.0, 0.5, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0}));
    REQUIRE(r.interior_plateaus.size() == 1);
    CHECK(r.interior_plateaus[0].first == 2);
    CHECK(r.interior_plateaus[0].last == 4);
    CHECK(!r.all_candidates_isolated());
    // the trailing pair is not interior and too short anyway
    CHECK(r.leading_run->length() == 1);
  }
  SUBCASE("epsilon decides what counts as zero") {
    const auto s = synthetic({1e-13, 1e-11});
    CHECK(dichotomy_scan(s, 1e-12).candidates.size() == 1);
    CHECK(dichotomy_scan(s, 1e-10).classification == Classification::identically_zero);
  }
}

TEST_CASE("weak causality difference") {
  SUBCASE("g = 0 gives an exactly zero difference") {
    ModelConfig c = testing_support::small_box(4);
    c.coupling_strength = 0.0;
    const auto d = weak_causality_difference(c, uniform_grid(10.0, 20));
    CHECK(d.signed_values);
    for (double v : d.values) CHECK(v == 0.0);
    CHECK(!detect_front(d).found);
  }
  SUBCASE("difference starts at zero and is signed") {
    const ModelConfig c = testing_support::small_box(8, 2, 0.1);
    const auto d = weak_causality_difference(c, uniform_grid(2.0 * c.separation(), 100));
    CHECK(d.values[0] == 0.0);
    CHECK(d.observable == "delta_excitation_B");
    bool any = false;
    for (double v : d.values) any = any || v != 0.0;
    CHECK(any);
  }
}

TEST_CASE("front detection") {
  SUBCASE("step series") {
    const auto f = detect_front(synthetic({0.0, 0.0, 1e-5, 0.02, 0.5, 1.0, -0.8}, 0.5));
    CHECK(f.found);
    CHECK(f.index == 3);
    CHECK(f.arrival == 1.5);
    CHECK(f.uncertainty == 0.5);
    CHECK(f.max_abs == 1.0);
    CHECK(f.threshold == doctest::Approx(0.01));
  }
  SUBCASE("fraction 1 finds the first maximum") {
    const auto f = detect_front(synthetic({0.0, -2.0, 1.0, 2.0}), 1.0);
    CHECK(f.index == 1);
  }
  SUBCASE("fraction outside (0, 1]") {
    CHECK_THROWS_AS(detect_front(synthetic({1.0}), 0.0), DomainError);
    CHECK_THROWS_AS(detect_front(synthetic({1.0}), 1.5), DomainError);
  }
  SUBCASE("lattice front arrives near the separation") {
    ModelConfig c;
    c.field_model = FieldKind::lattice_chain;
    c.lattice_sites = 8;
    c.x_B = 7.0;
    c.coupling_form = CouplingForm::rotating_wave;
    c.coupling_strength = 0.35;
    c.photon_region_begin = 2.0;
    c.photon_region_end = 5.0;
    const auto d = weak_causality_difference(c, uniform_grid(14.0, 280));
    const auto f = detect_front(d);
    REQUIRE(f.found);
    CHECK(f.arrival > 0.9 * c.separation());
    CHECK(f.arrival < 1.3 * c.separation());
  }
}

TEST_CASE("cutoff sweep") {
  ModelConfig c = testing_support::small_box(8);
  const auto grid = uniform_grid(c.separation(), 40);
  SUBCASE("single row") {
    const std::vector<double> cutoffs{8.0};
    const auto s = cutoff_sweep(c, cutoffs, grid);
    REQUIRE(s.rows.size() == 1);
    CHECK(s.rows[0].ok);
    CHECK(s.rows[0].modes == 8);
    CHECK(s.trend == "insufficient_data");
  }
  SUBCASE("repeated cutoff is constant") {
    const std::vector<double> cutoffs{2.0, 2.0};
    const auto s = cutoff_sweep(c, cutoffs, grid);
    CHECK(s.rows[0].max_acausal == s.rows[1].max_acausal);
    CHECK(s.trend == "constant");
  }
  SUBCASE("a failing row is recorded and the sweep goes on") {
    c.max_dimension = 100;
    // 0.1 keeps no mode at all, 100 keeps too many for the dimension limit
    const std::vector<double> cutoffs{0.1, 0.5, 100.0};
    const auto s = cutoff_sweep(c, cutoffs, grid);
    REQUIRE(s.rows.size() == 3);
    CHECK(!s.rows[0].ok);
    CHECK(!s.rows[0].error.empty());
    CHECK(s.rows[1].ok);
    CHECK(!s.rows[2].ok);
    CHECK(s.trend == "insufficient_data");
  }
  SUBCASE("decreasing list is rejected") {
    const std::vector<double> cutoffs{4.0, 2.0};
    CHECK_THROWS_AS(cutoff_sweep(c, cutoffs, grid), DomainError);
  }
}

TEST_CASE("auxiliary function") {
  const ModelConfig c = testing_support::small_box(4, 2, 0.1);
  const FockBasis b = build_basis(c);
  const Propagator p(build_hamiltonian(c, b));
  const BoundedObservable o = make_observable(c, b, ObservableKind::excitation_B);
  const StateVector psi0 = prepare_initial_state(b);

  SUBCASE("summed over a basis it rebuilds P(t) for a projector") {
    const double t = 3.7;
    double sum = 0.0;
    for (Index i = 0; i < b.dimension(); ++i) {
      sum += std::norm(auxiliary_function(p, o, basis_state(b, i), psi0, t));
    }
    CHECK(sum == doctest::Approx(expectation(p.evolve(psi0, t), o)).epsilon(1e-12));
  }
  SUBCASE("continuous onto the real axis") {
    std::mt19937_64 rng(3);
    const StateVector phi{b.tag(), testing_support::random_unit_vector(rng, b.dimension())};
    const cd edge = auxiliary_function(p, o, phi, psi0, 2.0);
    const cd near = auxiliary_function(p, o, phi, psi0, cd(2.0, -1e-9));
    CHECK(std::abs(edge - near) < 1e-7);
    CHECK(auxiliary_function(c, ObservableKind::excitation_B, phi, 2.0) == edge);
  }
  SUBCASE("phi from another basis") {
    const StateVector phi{{1, b.dimension()}, Eigen::VectorXcd::Zero(b.dimension())};
    CHECK_THROWS_AS(auxiliary_function(p, o, phi, psi0, 1.0), DomainError);
  }
}
