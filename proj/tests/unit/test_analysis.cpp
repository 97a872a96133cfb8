#include <doctest.h>

#include "fixtures.hpp"
#include "lsl/errors.hpp"

using namespace lsl;
using namespace lsl::testing;

TEST_CASE("radial_average") {
  const Grid g = rectangle(40, 20, 160, 80);

  SUBCASE("constant field") {
    GridFunction f(g);
    f.values.setConstant(2.5);
    int nonempty = 0;
    for (const auto& b : radial_average(f, {20.0, 0.0}, 30)) {
      if (b) {
        CHECK(*b == doctest::Approx(2.5));
        ++nonempty;
      }
    }
    CHECK(nonempty == 30);
  }
  SUBCASE("distance field recovers bin radii") {
    const std::array<double, 2> c{12.0, 7.0};
    GridFunction f(g);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto x = g.center(i);
      f.values[i] = std::hypot(x[0] - c[0], x[1] - c[1]);
    }
    const int bins = 25;
    const double rmax = std::hypot(40.0 - 12.0, 20.0 - 7.0);
    const double width = rmax / bins;
    const auto avg = radial_average(f, c, bins);
    for (int b = 0; b < bins; ++b) {
      if (avg[b]) CHECK(std::abs(*avg[b] - (b + 0.5) * width) <= 0.5 * width);
    }
  }
  SUBCASE("empty bins are absent") {
    const Grid coarse = rectangle(4, 4, 2, 2);
    GridFunction f(coarse);
    f.values.setOnes();
    // All four cell centers sit at distance √2 from the middle.
    const auto avg = radial_average(f, {2.0, 2.0}, 50);
    CHECK_FALSE(avg[0].has_value());
    CHECK(std::count_if(avg.begin(), avg.end(), [](const auto& b) { return b.has_value(); }) == 1);
    CHECK(radial_norm(avg) == doctest::Approx(1.0));
  }
  SUBCASE("center outside the grid") {
    CHECK_THROWS_AS(radial_average(GridFunction(g), {41.0, 1.0}, 4), ContractError);
  }
}

TEST_CASE("compare_images") {
  const Grid g = rectangle(10, 10, 10, 10);
  GridFunction truth(g);
  truth.values.segment(30, 20).setConstant(1.0);
  const Box shadow{{0.0, 6.0}, {10.0, 8.0}};

  SUBCASE("perfect image") {
    const ImageComparison c = compare_images(truth, truth, shadow);
    CHECK(c.relative_error == 0.0);
    CHECK(c.correlation == doctest::Approx(1.0));
    CHECK(*c.ghost_ratio == 0.0);
  }
  SUBCASE("empty image") {
    const ImageComparison c = compare_images(GridFunction(g), truth, shadow);
    CHECK(c.relative_error == 1.0);
    CHECK_FALSE(c.ghost_ratio.has_value());
  }
  SUBCASE("ghost energy ratio") {
    GridFunction image = truth;
    image.values[65] = 2.0;  // row 6: shadow
    const ImageComparison c = compare_images(image, truth, shadow);
    CHECK(*c.ghost_ratio == doctest::Approx(4.0 / 20.0));
    CHECK(c.correlation < 1.0);
  }
  SUBCASE("explicit support") {
    const Box support{{0.0, 3.0}, {10.0, 4.0}};
    GridFunction image(g);
    image.values.segment(30, 10).setConstant(1.0);
    image.values[62] = 1.0;
    const ImageComparison c = compare_images(image, truth, shadow, support);
    CHECK(*c.ghost_ratio == doctest::Approx(0.1));
  }
  SUBCASE("regions outside the grid") {
    CHECK_THROWS_AS(compare_images(truth, truth, Box{{0.0, 11.0}, {10.0, 12.0}}), ContractError);
  }
}

TEST_CASE("restrict_to") {
  const Grid fine = rectangle(4, 2, 8, 4);
  const Grid coarse = rectangle(4, 2, 4, 2);
  GridFunction f(fine);
  for (Eigen::Index i = 0; i < fine.size(); ++i) f.values[i] = double(i);
  const GridFunction c = restrict_to(f, coarse);
  // Coarse cell (0,0) averages fine cells (0,0), (1,0), (0,1), (1,1).
  CHECK(c.values[0] == doctest::Approx((0 + 1 + 8 + 9) / 4.0));
  CHECK(inner(c, GridFunction(coarse, Eigen::VectorXd::Ones(coarse.size()))) ==
        doctest::Approx(inner(f, GridFunction(fine, Eigen::VectorXd::Ones(fine.size())))));
  CHECK_THROWS_AS(restrict_to(f, rectangle(4, 2, 3, 2)), ContractError);
}
