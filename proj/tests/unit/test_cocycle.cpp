#include <doctest.h>

#include <hypdim/catalog.hpp>
#include <hypdim/cocycle.hpp>

#include "support/oracles.hpp"

#include <cmath>

using namespace hypdim;

namespace {

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Point pt(double x) {
  Point p(1);
  p << x;
  return p;
}

}  // namespace

TEST_CASE("cat map cocycle grows at the golden rate on both bundles") {
  const auto e = catalog_system("cat_map");
  const Point x = pt(0.123, 0.456);
  for (Bundle b : {Bundle::unstable, Bundle::stable}) {
    const auto v = cocycle_value(e.system, e.frame, x, 10, b);
    CHECK(v.dim() == 1);
    CHECK(v.log_op_norm == doctest::Approx(10 * oracle::kLogGolden).epsilon(1e-10));
    CHECK(v.log_conorm == doctest::Approx(v.log_op_norm).epsilon(1e-12));
    CHECK(v.log_abs_det == doctest::Approx(v.log_op_norm).epsilon(1e-12));
  }
}

TEST_CASE("prefix values match one-shot values") {
  const auto e = catalog_system("perturbed_doubling");
  const Point x = pt(0.3);
  const auto prefix = cocycle_prefix(e.system, e.frame, x, 12, Bundle::unstable);
  REQUIRE(prefix.size() == 12);
  for (int n : {1, 5, 12})
    CHECK(prefix[n - 1].log_op_norm == doctest::Approx(cocycle_value(e.system, e.frame, x, n, Bundle::unstable).log_op_norm));
}

TEST_CASE("perturbed doubling cocycle is the product of derivatives") {
  const auto e = catalog_system("perturbed_doubling");
  const double a = 0.1;
  double x = 0.2, acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    acc += std::log(2.0 + 2.0 * M_PI * a * std::cos(2.0 * M_PI * x));
    x = std::fmod(2.0 * x + a * std::sin(2.0 * M_PI * x), 1.0);
    if (x < 0) x += 1.0;
  }
  CHECK(cocycle_value(e.system, e.frame, pt(0.2), 6, Bundle::unstable).log_op_norm == doctest::Approx(acc).epsilon(1e-10));
}

TEST_CASE("jordan cocycle has the closed-form singular values") {
  const auto e = catalog_system("jordan_endomorphism");
  const auto v = cocycle_value(e.system, e.frame, pt(0.3, 0.7), 16, Bundle::unstable);
  const double s = std::log(oracle::shear_sigma_max(16.0));
  CHECK(v.log_op_norm == doctest::Approx(16 * std::log(3.0) + s).epsilon(1e-10));
  CHECK(v.log_conorm == doctest::Approx(16 * std::log(3.0) - s).epsilon(1e-10));
  CHECK(v.log_abs_det == doctest::Approx(32 * std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("potentials follow their definitions") {
  const auto e = catalog_system("diag_endomorphism");
  const auto v = cocycle_value(e.system, e.frame, pt(0.1, 0.2), 3, Bundle::unstable);
  CHECK(potential_of(PotentialKind::super_norm, v) == doctest::Approx(-3 * std::log(3.0)));
  CHECK(potential_of(PotentialKind::sub_conorm, v) == doctest::Approx(-3 * std::log(2.0)));
  CHECK(potential_of(PotentialKind::additive_det, v) == doctest::Approx(-1.5 * std::log(6.0)));
}

TEST_CASE("lyapunov exponents of the diagonal map") {
  const auto e = catalog_system("diag_endomorphism");
  const auto r = lyapunov_exponents(e.system, e.frame, pt(0.3183, 0.2718), 400, Bundle::unstable);
  REQUIRE(r.exponents.size() == 2);
  CHECK(r.exponents[0] == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(r.exponents[1] == doctest::Approx(std::log(3.0)).epsilon(1e-6));
  CHECK(r.converged);
  CHECK_THROWS_AS(lyapunov_exponents(e.system, e.frame, pt(0.1, 0.1), 10, Bundle::unstable), InvalidArgument);
}

TEST_CASE("conformality defect") {
  SUBCASE("jordan map matches the shear formula") {
    const auto e = catalog_system("jordan_endomorphism");
    const std::vector<Point> sample = {pt(0.1, 0.2), pt(0.5, 0.9)};
    const double expect = 2.0 * std::log(oracle::shear_sigma_max(32.0)) / 32.0;
    CHECK(conformality_defect(e.system, e.frame, Bundle::unstable, 32, sample) == doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("diagonal map has defect log(3/2)") {
    const auto e = catalog_system("diag_endomorphism");
    CHECK(conformality_defect(e.system, e.frame, Bundle::unstable, 8, {pt(0.4, 0.6)}) ==
          doctest::Approx(std::log(1.5)).epsilon(1e-12));
  }
  SUBCASE("one-dimensional bundles are conformal") {
    const auto e = catalog_system("cat_map");
    CHECK(conformality_defect(e.system, e.frame, Bundle::stable, 16, e.info.sample(20, 3)) == doctest::Approx(0.0));
  }
}

TEST_CASE("kingman estimates") {
  SUBCASE("constant Jacobian: limit and infimum coincide") {
    const auto e = catalog_system("cat_map");
    const auto pot = make_potential(e.system, e.frame, PotentialKind::super_norm, Bundle::unstable);
    const auto k = kingman_check(pot, e.info.sample(1, 9).front(), 64);
    CHECK(k.limit_estimate == doctest::Approx(-oracle::kLogGolden).epsilon(1e-10));
    CHECK(k.inf_estimate == doctest::Approx(k.limit_estimate).epsilon(1e-10));
  }
  SUBCASE("perturbed doubling stays near -log 2") {
    const auto e = catalog_system("perturbed_doubling");
    const auto pot = make_potential(e.system, e.frame, PotentialKind::sub_conorm, Bundle::unstable);
    const auto k = kingman_check(pot, pt(0.377), 512);
    CHECK(k.inf_estimate <= k.limit_estimate + 1e-12);
    CHECK(std::abs(k.limit_estimate + std::log(2.0)) < 0.1);
  }
}

TEST_CASE("4C inequality holds with the sampled constants") {
  for (const char* name : {"cat_map", "jordan_endomorphism", "perturbed_doubling"}) {
    const auto e = catalog_system(name);
    const auto sample = e.info.sample(64, 11);
    for (auto kind : {PotentialKind::super_norm, PotentialKind::sub_conorm}) {
      const auto pot = make_potential(e.system, e.frame, kind, Bundle::unstable);
      const auto c = four_c_constants(pot, sample, 4);
      CHECK(c.c1 >= 0.0);
      CHECK(c.c2 == doctest::Approx(-c.c1));
      for (int i = 0; i < 8; ++i) CHECK(four_c_inequality_check(pot, sample[i], 32, c));
    }
  }
}
