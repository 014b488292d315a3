#include <doctest.h>

#include <hypdim/bowen.hpp>

#include "support/oracles.hpp"

#include <cmath>

using namespace hypdim;

TEST_CASE("bisection on a linear pressure") {
  auto p = [](double s) { return std::log(2.0) - s * std::log(3.0); };
  CHECK(bowen_root(p, 0.0, 1.0, 1e-13) == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-12));
  const auto r = bowen_root_auto(p, 1, 1e-13);
  CHECK(r.root == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-12));
  CHECK(std::abs(r.pressure) < 1e-12);
  CHECK(r.iterations <= 64);
}

TEST_CASE("bisection rejects bad brackets") {
  auto p = [](double s) { return 1.0 - s; };
  CHECK_THROWS_AS(bowen_root(p, 2.0, 3.0, 1e-12), NumericalError);
  auto wiggle = [](double s) { return std::cos(8.0 * s); };
  CHECK_THROWS_AS(bowen_root(wiggle, 0.0, 3.0, 1e-12), NumericalError);
  auto flat = [](double) { return 1.0; };
  CHECK_THROWS_AS(bowen_root_auto(flat, 1, 1e-12), NumericalError);
}

TEST_CASE("dimension formula on coded repellers") {
  CHECK(dimension_via_formula(catalog_system("cantor_repeller"), Bundle::unstable, 8).r ==
        doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-9));
  const auto cookie = dimension_via_formula(catalog_system("cookie_cutter"), Bundle::unstable, 8);
  CHECK(cookie.r == doctest::Approx(oracle::moran({1.0 / 3, 1.0 / 4})).epsilon(1e-9));
  // At the root, h = r * integral of log|f'|.
  CHECK(cookie.entropy == doctest::Approx(cookie.r * cookie.det_integral).epsilon(1e-8));
  const auto pd = dimension_via_formula(catalog_system("perturbed_doubling"), Bundle::unstable, 10);
  CHECK(pd.r == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("dimension formula on the cat map") {
  const auto e = catalog_system("cat_map");
  for (Bundle b : {Bundle::unstable, Bundle::stable}) {
    const auto f = dimension_via_formula(e, b, 8);
    CHECK(f.r == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.entropy == doctest::Approx(oracle::kLogGolden).epsilon(1e-6));
  }
}

TEST_CASE("sandwich brackets") {
  SUBCASE("collapse for conformal repellers") {
    for (const auto& br : sandwich_sequence(catalog_system("cantor_repeller"), Bundle::unstable, 3,
                                            SandwichMethod::transfer_operator)) {
      CHECK(br.s_val == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-8));
      CHECK(br.t_val == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-8));
    }
  }
  SUBCASE("jordan brackets follow the closed form") {
    const auto rows = sandwich_sequence(catalog_system("jordan_endomorphism"), Bundle::unstable, 3,
                                        SandwichMethod::transfer_operator);
    REQUIRE(rows.size() == 4);
    for (const auto& br : rows) {
      const double m = std::pow(2.0, br.k);
      const double b = m * std::log(3.0);
      const double sh = std::log(oracle::shear_sigma_max(m));
      CHECK(br.s_val == doctest::Approx(2 * b / (b + sh)).epsilon(1e-8));
      CHECK(br.t_val == doctest::Approx(2 * b / (b - sh)).epsilon(1e-8));
      CHECK(br.s_val <= 2.0 + 1e-9);
      CHECK(br.t_val >= 2.0 - 1e-9);
    }
  }
}

TEST_CASE("affordable depth and defect samples") {
  const auto e = catalog_system("cantor_repeller");
  CHECK(affordable_depth(*e.coding, 20, 1024) == 10);
  CHECK(affordable_depth(*e.coding, 5, 1024) == 5);
  CHECK(defect_sample(e, 8, 4096).size() == 256);
  CHECK(defect_sample(e, 20, 100).size() <= 100);
}

TEST_CASE("full reports") {
  ReportOptions o;
  o.k_max = 2;
  SUBCASE("horseshoe total is the sum of both bundles") {
    const auto r = full_report(catalog_system("linear_horseshoe"), o);
    REQUIRE(r.total_dim);
    CHECK(*r.total_dim == doctest::Approx(2 * oracle::kLog2OverLog3).epsilon(1e-8));
    CHECK(r.flags.empty());
  }
  SUBCASE("diagonal map is flagged, not rejected") {
    const auto r = full_report(catalog_system("diag_endomorphism"), o);
    CHECK(r.has_flag(kNonConformalFlag));
    REQUIRE(r.find(Bundle::unstable));
    CHECK_FALSE(r.find(Bundle::unstable)->applicable);
  }
}
