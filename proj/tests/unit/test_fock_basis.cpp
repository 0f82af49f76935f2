#include <doctest.h>

#include <functional>
#include <set>

#include "support.hpp"
#include "twoatom/errors.hpp"
#include "twoatom/field_model.hpp"
#include "twoatom/fock_basis.hpp"

using namespace twoatom;

namespace {

// Brute force: every vector in {0..N}^M with sum <= N.
long long brute_force_count(int modes, int max_photons) {
  long long count = 0;
  std::vector<int> n(static_cast<std::size_t>(modes), 0);
  std::function<void(int, int)> rec = [&](int m, int left) {
    if (m == modes) {
      ++count;
      return;
    }
    for (int k = 0; k <= left; ++k) rec(m + 1, left - k);
  };
  rec(0, max_photons);
  return count;
}

}  // namespace

TEST_CASE("dimension examples") {
  CHECK(build_basis(BasisShape{2, 2, 1, 1}).dimension() == 8);
  CHECK(build_basis(BasisShape{2, 2, 2, 2}).dimension() == 24);
  CHECK(build_basis(BasisShape{2, 2, 8, 2}).dimension() == 180);
  // 1 + 8 + C(9,2) occupation vectors
  CHECK(brute_force_count(8, 2) == 1 + 8 + 36);
}

TEST_CASE("count law matches brute-force enumeration") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 0; n <= 4; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const long long expected = brute_force_count(m, n);
      CHECK(count_occupations(m, n) == expected);
      CHECK(build_basis(BasisShape{2, 3, m, n}).dimension() == 6 * expected);
    }
  }
}

TEST_CASE("M = 2, N = 2 occupation vectors in lexicographic order") {
  const FockBasis b(BasisShape{2, 2, 2, 2});
  const std::vector<Occupation> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};
  REQUIRE(b.photon_states() == 6);
  for (Index p = 0; p < 6; ++p) {
    const auto occ = b.occupation(p);
    CHECK(Occupation(occ.begin(), occ.end()) == expected[static_cast<std::size_t>(p)]);
  }
  CHECK(b.state(0) == BareState{0, 0, {0, 0}});
  CHECK(b.state(23) == BareState{1, 1, {2, 0}});
}

TEST_CASE("round trip and truncation invariants") {
  const FockBasis b(BasisShape{3, 2, 4, 3});
  std::set<std::tuple<int, int, Occupation>> seen;
  for (Index i = 0; i < b.dimension(); ++i) {
    const BareState s = b.state(i);
    CHECK(b.index_of(s) == i);
    int total = 0;
    for (auto n : s.occupation) total += n;
    CHECK(total <= 3);
    CHECK(seen.emplace(s.a_level, s.b_level, s.occupation).second);
  }
  CHECK(static_cast<Index>(seen.size()) == b.dimension());
}

TEST_CASE("index_of examples and errors") {
  const FockBasis b(BasisShape{2, 2, 3, 2});
  const Index ground = b.index_of(0, 0, Occupation{0, 0, 0});
  CHECK(b.state(ground) == BareState{0, 0, {0, 0, 0}});
  const Index excited_a = b.index_of(1, 0, Occupation{0, 0, 0});
  CHECK(b.state(excited_a) == BareState{1, 0, {0, 0, 0}});
  CHECK_THROWS_AS(b.index_of(0, 0, Occupation{1, 1, 1}), NotInBasis);
  CHECK_THROWS_AS(b.index_of(0, 0, Occupation{0, 0}), NotInBasis);
  CHECK_THROWS_AS(b.index_of(2, 0, Occupation{0, 0, 0}), NotInBasis);
  CHECK_THROWS_AS(b.state(b.dimension()), NotInBasis);
}

TEST_CASE("raise and lower tables agree with occupations") {
  const FockBasis b(BasisShape{2, 2, 3, 2});
  for (Index p = 0; p < b.photon_states(); ++p) {
    const auto occ = b.occupation(p);
    for (int q = 0; q < 3; ++q) {
      const Index lo = b.lowered(p, q);
      if (occ[q] == 0) {
        CHECK(lo == -1);
      } else {
        CHECK(b.occupation(lo)[q] == occ[q] - 1);
        CHECK(b.raised(lo, q) == p);
      }
      if (b.photon_number(p) == 2) CHECK(b.raised(p, q) == -1);
    }
  }
}

TEST_CASE("determinism and tags") {
  const ModelConfig c = testing_support::small_box(8);
  const FockBasis a = build_basis(c);
  const FockBasis b = build_basis(c);
  REQUIRE(a.dimension() == b.dimension());
  for (Index i = 0; i < a.dimension(); ++i) CHECK(a.state(i) == b.state(i));
  CHECK(a.tag() == b.tag());
  CHECK_FALSE(a.tag() == build_basis(testing_support::small_box(8, 1)).tag());
}

TEST_CASE("default config: 32 modes, two photons") {
  const FockBasis b = build_basis(ModelConfig{});
  CHECK(b.modes() == 32);
  CHECK(b.dimension() == 4 * 561);
}

TEST_CASE("cutoff filters modes") {
  ModelConfig c = testing_support::small_box(16);
  c.cutoff = 1.0;  // omega_n = |n| / 4
  CHECK(build_basis(c).modes() == 8);
  c.cutoff = 0.1;
  CHECK_THROWS_AS(build_basis(c), ConfigError);
}

TEST_CASE("dimension overflow is reported before enumeration") {
  ModelConfig c;
  c.num_modes = 400;
  c.max_photons = 6;
  c.cutoff = 1000;
  try {
    build_basis(c);
    FAIL("expected DimensionOverflow");
  } catch (const DimensionOverflow& e) {
    CHECK(e.limit() == 200000);
    CHECK(e.requested() > e.limit());
  }
}
