#include <doctest.h>

#include <hypdim/catalog.hpp>
#include <hypdim/coding.hpp>

#include "support/oracles.hpp"

#include <cmath>

using namespace hypdim;

namespace {

Point pt(double x) {
  Point p(1);
  p << x;
  return p;
}

}  // namespace

TEST_CASE("golden mean words") {
  const auto c = golden_mean_coding();
  // Fibonacci numbers: words of length n avoiding "11" number F(n + 2).
  CHECK(count_words(c.transition, 1) == 2);
  CHECK(count_words(c.transition, 8) == 55);
  const auto words = enumerate_words(c, 8);
  REQUIRE(words.size() == 55);
  for (std::size_t i = 0; i < words.size(); ++i) {
    CHECK(c.admissible(words[i]));
    if (i) CHECK(words[i - 1] < words[i]);
  }
  CHECK_FALSE(c.admissible(Word{0, 1, 1, 0}));
  CHECK_THROWS_AS(enumerate_words(c, 20, 100), InvalidArgument);
}

TEST_CASE("irreducibility") {
  TransitionMatrix id = TransitionMatrix::Identity(2, 2);
  TransitionMatrix full = TransitionMatrix::Ones(3, 3);
  TransitionMatrix chain(2, 2);
  chain << 1, 1, 0, 1;
  CHECK_FALSE(is_irreducible(id));
  CHECK(is_irreducible(full));
  CHECK_FALSE(is_irreducible(chain));
  CHECK(is_irreducible(golden_mean_coding().transition));
}

TEST_CASE("cantor cylinders shrink by the slope and nest") {
  const auto e = catalog_system("cantor_repeller");
  const auto& c = *e.coding;
  const Point z = pt(0.25);  // 0.020202..._3 lies in the middle-thirds set
  CHECK(e.system.in_invariant_set(z));
  CHECK(itinerary(c, z, 0, 6) == Word{0, 1, 0, 1, 0, 1});
  Region prev = cylinder(c, z, 1, Bundle::unstable);
  CHECK(prev.diameter() == doctest::Approx(1.0 / 3));
  for (int n = 2; n <= 8; ++n) {
    const Region cyl = cylinder(c, z, n, Bundle::unstable);
    CHECK(cyl.diameter() == doctest::Approx(std::pow(3.0, -n)).epsilon(1e-9));
    CHECK(cyl.contains(z));
    CHECK(prev.contains(cyl, 1e-12));
    prev = cyl;
  }
}

TEST_CASE("two-sided cylinders contain the base point") {
  for (const char* name : {"cat_map", "linear_horseshoe"}) {
    const auto e = catalog_system(name);
    const auto z = e.info.sample(1, 5).front();
    for (Bundle b : {Bundle::unstable, Bundle::stable}) {
      Region prev = cylinder(*e.coding, z, 2, b);
      for (int n = 3; n <= 6; ++n) {
        const Region cyl = cylinder(*e.coding, z, n, b);
        CHECK(e.system.domain.distance(cyl.at(cyl.coordinates(z)), z) < 1e-9);
        CHECK(cyl.diameter() < prev.diameter());
        prev = cyl;
      }
    }
  }
}

TEST_CASE("anchors lie in their cylinders") {
  const auto e = catalog_system("cookie_cutter");
  const auto& c = *e.coding;
  for (const auto& w : enumerate_words(c, 5)) {
    const Point a = c.anchor(w);
    CHECK(e.system.in_invariant_set(a));
    CHECK(itinerary(c, a, 0, 5) == w);
  }
}

TEST_CASE("jordan map has no affine cylinders") {
  const auto e = catalog_system("jordan_endomorphism");
  REQUIRE(e.coding);
  Point z(2);
  z << 0.2, 0.3;
  CHECK_THROWS_AS(cylinder(*e.coding, z, 3, Bundle::unstable), InvalidArgument);
}

TEST_CASE("quasi-conformal ratios") {
  SUBCASE("affine branches give ratio one") {
    const auto e = catalog_system("cookie_cutter");
    // 0 is the fixed point of the slope-3 branch.
    const auto q = quasi_conformal_ratio(e.system, *e.coding, pt(0.0), 4, 2, Bundle::unstable, 256);
    CHECK(q.ratio() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q.lambda_lower == doctest::Approx(std::pow(3.0, 4)).epsilon(1e-9));
  }
  SUBCASE("nonlinear branches give a bounded ratio that improves with k") {
    const auto e = catalog_system("perturbed_doubling");
    const auto q1 = quasi_conformal_ratio(e.system, *e.coding, pt(0.3), 4, 1, Bundle::unstable, 256);
    const auto q4 = quasi_conformal_ratio(e.system, *e.coding, pt(0.3), 4, 4, Bundle::unstable, 256);
    CHECK(q1.ratio() >= 1.0);
    CHECK(q4.ratio() >= 1.0);
    CHECK(q4.ratio() <= q1.ratio() + 1e-12);
    CHECK(q1.ratio() < 2.0);
  }
}
