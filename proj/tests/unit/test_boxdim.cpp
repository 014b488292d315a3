#include <doctest.h>

#include <hypdim/boxdim.hpp>

#include "support/oracles.hpp"

#include <cmath>
#include <sstream>

using namespace hypdim;

TEST_CASE("leaf samples") {
  CHECK(sample_leaf_set(golden_mean_coding(), Bundle::unstable, 8).size() == 55);
  const auto e = catalog_system("cantor_repeller");
  CHECK(sample_leaf_set(*e.coding, Bundle::unstable, 8).size() == 256);
  CHECK_THROWS_AS(sample_leaf_set(*e.coding, Bundle::stable, 8), InvalidArgument);
  CHECK_THROWS_AS(sample_leaf_set(*e.coding, Bundle::unstable, 0), InvalidArgument);
}

TEST_CASE("geometric ladder") {
  const auto l = geometric_ladder(0.5, 2, 4);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == doctest::Approx(0.25));
  CHECK(l[2] == doctest::Approx(0.0625));
  CHECK_THROWS_AS(geometric_ladder(1.0), InvalidArgument);
}

TEST_CASE("nearest-neighbour spacing of a uniform grid") {
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(Point::Constant(1, i / 100.0));
  CHECK(median_nn_spacing(pts) == doctest::Approx(0.01));
}

TEST_CASE("box counts") {
  SUBCASE("middle-thirds set") {
    const auto e = catalog_system("cantor_repeller");
    const auto pts = sample_leaf_set(*e.coding, Bundle::unstable, 10);
    const auto t = box_dimension(pts, geometric_ladder(1.0 / 3, 2, 6));
    CHECK(t.counts.front() == 4);
    CHECK(t.counts.back() == 64);
    CHECK(t.fit_dim == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-3));
  }
  SUBCASE("filled square") {
    std::vector<Point> pts;
    for (int i = 0; i < 256; ++i)
      for (int j = 0; j < 256; ++j) {
        Point p(2);
        p << (i + 0.5) / 256, (j + 0.5) / 256;
        pts.push_back(p);
      }
    CHECK(box_dimension(pts, geometric_ladder(0.5, 1, 4)).fit_dim == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(box_dimension({Point::Constant(1, 0.3)}, {0.1, 0.01}), InvalidArgument);
    CHECK_THROWS_AS(box_dimension({}, {0.1, 0.01}), InvalidArgument);
    const auto pts = sample_leaf_set(*catalog_system("cantor_repeller").coding, Bundle::unstable, 4);
    CHECK_THROWS_AS(box_dimension(pts, {0.1, 1e-4}), InvalidArgument);
    CHECK_THROWS_AS(box_dimension(pts, {0.1}), InvalidArgument);
  }
}

TEST_CASE("box-count oracle agrees with known dimensions") {
  CHECK(boxdim_oracle(catalog_system("cookie_cutter")).fit_dim ==
        doctest::Approx(oracle::moran({1.0 / 3, 1.0 / 4})).epsilon(0.05));
  CHECK(boxdim_oracle(catalog_system("linear_horseshoe"), {8}).fit_dim ==
        doctest::Approx(2 * oracle::kLog2OverLog3).epsilon(0.05));
  CHECK(boxdim_leaf(catalog_system("linear_horseshoe"), Bundle::stable).fit_dim ==
        doctest::Approx(oracle::kLog2OverLog3).epsilon(0.05));
}

TEST_CASE("box-count csv") {
  BoxCountTable t;
  t.scales = {0.5, 0.25};
  t.counts = {2, 4};
  std::ostringstream os;
  write_boxdim_csv(os, t);
  CHECK(os.str() == "scale,count\n0.5,2\n0.25,4\n");
}
