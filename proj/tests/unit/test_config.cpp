#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twoatom/config.hpp"
#include "twoatom/errors.hpp"

using namespace twoatom;

TEST_CASE("defaults put the atoms half a box apart") {
  const ModelConfig c;
  CHECK(c.separation() == doctest::Approx(c.mode_length / 2));
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("canonical text round-trips every field") {
  ModelConfig c;
  c.omega_B = 1.0 / 3.0;
  c.coupling_strength = 0.1 + 0.2;
  c.coupling_form = CouplingForm::rotating_wave;
  c.cutoff = std::numeric_limits<double>::infinity();
  c.max_dimension = 1234567;
  const ModelConfig back = parse_config(to_config_text(c));
  CHECK(to_config_text(back) == to_config_text(c));
  CHECK(back.omega_B == c.omega_B);
  CHECK(back.coupling_strength == c.coupling_strength);
  CHECK(std::isinf(back.cutoff));
  CHECK(back.coupling_form == CouplingForm::rotating_wave);
  CHECK(fingerprint(back) == fingerprint(c));
}

TEST_CASE("fingerprint changes with any field") {
  const ModelConfig a;
  ModelConfig b;
  b.max_photons = 1;
  CHECK(fingerprint(a) != fingerprint(b));
  // FNV-1a reference values
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config("num_mode = 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("num_modes = 4\nnum_modes = 6"), ConfigError);
  CHECK_THROWS_AS(parse_config("num_modes = four"), ConfigError);
  CHECK_THROWS_AS(parse_config("num_modes = 4.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("omega_A = 1.0x"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words"), ConfigError);
  CHECK_THROWS_AS(parse_config("coupling_form = dipole"), ConfigError);
  CHECK_THROWS_AS(parse_config("dispersion = quadratic"), ConfigError);
  CHECK_THROWS_AS(parse_config("omega_A = nan"), ConfigError);
}

TEST_CASE("parser accepts comments, blanks and partial configs") {
  const auto c = parse_config("# comment\n\n  num_modes = 8   # trailing\nmax_photons=1\n");
  CHECK(c.num_modes == 8);
  CHECK(c.max_photons == 1);
  CHECK(c.omega_A == 1.0);
}

TEST_CASE("invariants are enforced") {
  CHECK_THROWS_AS(parse_config("x_B = 0"), ConfigError);            // R = 0
  CHECK_THROWS_AS(parse_config("num_modes = 1"), ConfigError);      // M >= 2
  CHECK_THROWS_AS(parse_config("max_photons = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("levels_B = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("cutoff = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("x_B = 100"), ConfigError);          // outside the box
  CHECK_THROWS_AS(parse_config("photon_region_begin = 3\nphoton_region_end = 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("field_model = lattice_chain\nx_B = 2.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("field_model = lattice_chain\nx_B = 0"), ConfigError);
  CHECK_NOTHROW(parse_config("field_model = lattice_chain\nx_B = 11"));
}

TEST_CASE("format_double prints 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}
