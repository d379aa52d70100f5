#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cheb/oracle.hpp"
#include "cheb/presets.hpp"
#include "test_support.hpp"

using cheb::ProblemInstance;
using cheb::Vector;

TEST_CASE("every sample lands in the feasible set") {
  SUBCASE("unit square") {
    const auto samples = cheb::sample_feasible(cheb::rec1(), 2000, 1);
    REQUIRE(samples.size() == 2000);
    for (const auto& f : samples) {
      CHECK(std::abs(f[0]) <= 1.0 + 1e-9);
      CHECK(std::abs(f[1]) <= 1.0 + 1e-9);
    }
  }
  SUBCASE("shifted ball") {
    const ProblemInstance inst = cheb::ball1();
    const auto samples = cheb::sample_feasible(inst, 2000, 2);
    for (const auto& f : samples) {
      CHECK((f - inst.y).norm() <= 1.0 + 1e-9);
      CHECK(std::abs(f[0]) <= 2.0 + 1e-9);
    }
  }
  SUBCASE("empty request") {
    CHECK(cheb::sample_feasible(cheb::rec1(), 0, 3).empty());
  }
  SUBCASE("prefixes are stable as the budget grows") {
    const auto small = cheb::sample_feasible(cheb::rec1(), 1500, 7);
    const auto large = cheb::sample_feasible(cheb::rec1(), 3000, 7);
    REQUIRE(large.size() == 3000);
    for (std::size_t i = 0; i < small.size(); ++i)
      CHECK((small[i] - large[i]).norm() == 0.0);
  }
}

TEST_CASE("interior start point is strictly feasible") {
  for (int trial = 0; trial < 8; ++trial) {
    const ProblemInstance inst = cheb::random_specific(5, 2, 1200 + trial);
    const Vector f0 = cheb::feasible_start(inst);
    const auto mem = cheb::membership(inst, f0);
    CHECK(mem.slack_model > 0.0);
    CHECK(mem.slack_data > 0.0);
  }
}

TEST_CASE("sampled worst value against known geometry") {
  SUBCASE("square from its center") {
    const auto report = cheb::sv_lower_bound(cheb::rec1(), Vector::Zero(2), 20000, 20, 5);
    CHECK(report.sv_lower <= 2.0 + 1e-9);
    CHECK(report.sv_lower >= 2.0 - 1e-6);
    // The reported maximizer really is feasible and really attains the value.
    const auto mem = cheb::membership(cheb::rec1(), report.argmax_point);
    CHECK(mem.slack_model >= -1e-9);
    CHECK(mem.slack_data >= -1e-9);
    CHECK(report.argmax_point.squaredNorm() ==
          doctest::Approx(report.sv_lower).epsilon(1e-12));
  }
  SUBCASE("rectangle from its center") {
    Vector z(2);
    z << 0.3, 0.0;
    const auto report = cheb::sv_lower_bound(cheb::rec2(), z, 20000, 20, 5);
    CHECK(report.sv_lower <= 5.0 + 1e-9);
    CHECK(report.sv_lower >= 5.0 - 1e-6);
  }
  SUBCASE("ball from an off-center point") {
    Vector z(2);
    z << 0.0, 0.0;
    // sup ||f - 0||^2 over the unit ball around (0.5, 0) is (0.5 + 1)^2.
    const auto report = cheb::sv_lower_bound(cheb::ball1(), z, 20000, 20, 5);
    CHECK(report.sv_lower <= 2.25 + 1e-9);
    CHECK(report.sv_lower >= 2.25 - 1e-6);
  }
}

TEST_CASE("oracle reports are deterministic") {
  Vector z(2);
  z << 0.1, -0.2;
  const auto a = cheb::sv_lower_bound(cheb::rec2(), z, 5000, 10, 99);
  const auto b = cheb::sv_lower_bound(cheb::rec2(), z, 5000, 10, 99);
  CHECK(a.sv_lower == b.sv_lower);
  CHECK((a.argmax_point - b.argmax_point).norm() == 0.0);
  CHECK(a.samples_used == b.samples_used);
}

TEST_CASE("planar grid search recovers known centers") {
  SUBCASE("square") {
    const auto grid = cheb::grid_chebyshev_2d(cheb::rec1(), 1e-3);
    CHECK(std::abs(grid.center[0]) <= 2e-3);
    CHECK(std::abs(grid.center[1]) <= 2e-3);
    CHECK(grid.radius == doctest::Approx(std::sqrt(2.0)).epsilon(2e-3));
    CHECK(grid.near_optimal_cells == 1);
  }
  SUBCASE("rectangle") {
    const auto grid = cheb::grid_chebyshev_2d(cheb::rec2(), 1e-3);
    CHECK(grid.center[0] == doctest::Approx(0.3).epsilon(2e-3));
    CHECK(std::abs(grid.center[1]) <= 2e-3);
    CHECK(grid.radius == doctest::Approx(std::sqrt(5.0)).epsilon(2e-3));
  }
  SUBCASE("ball") {
    const auto grid = cheb::grid_chebyshev_2d(cheb::ball1(), 1e-3);
    CHECK(grid.center[0] == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(grid.radius == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("grid search guards its preconditions") {
  CHECK_THROWS_AS(cheb::grid_chebyshev_2d(cheb::random_specific(3, 2, 1), 1e-2),
                  cheb::ValidationError);
  ProblemInstance nonid = cheb::rec1();
  nonid.Q = 2.0 * cheb::Matrix::Identity(2, 2);
  CHECK_THROWS_AS(cheb::grid_chebyshev_2d(nonid, 1e-2), cheb::ValidationError);
  CHECK_THROWS_AS(cheb::grid_chebyshev_2d(cheb::rec1(), 0.0), cheb::ValidationError);
}
