#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cheb/global.hpp"
#include "cheb/presets.hpp"
#include "cheb/regularize.hpp"
#include "test_support.hpp"

using cheb::Matrix;
using cheb::ProblemInstance;
using cheb::Vector;

TEST_CASE("globally optimal map for the product instance") {
  const ProblemInstance inst =
      cheb::rectangle_instance(2, 1, 1.0, 1.0, Vector::Zero(1));
  const auto sol = cheb::solve_global(inst);
  // The matrix constraint diag(d, c) >= Id pins both weights at 1.
  CHECK(sol.c_sharp == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.d_sharp == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.tau_sharp == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.sdp_value == doctest::Approx(2.0).epsilon(1e-8));
  REQUIRE(sol.map.rows() == 2);
  REQUIRE(sol.map.cols() == 1);
  CHECK(sol.map(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(sol.map(1, 0)) <= 1e-8);
}

TEST_CASE("budget asymmetry moves the value but not the balance point") {
  const ProblemInstance inst =
      cheb::rectangle_instance(2, 1, 2.0, 1.0, Vector::Zero(1));
  const auto sol = cheb::solve_global(inst);
  CHECK(sol.sdp_value == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(sol.tau_sharp == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("the balance point is budget-free across the product family") {
  for (const auto& dims : {std::pair<int, int>{4, 2}, {5, 2}, {6, 3}}) {
    for (const auto& budgets : {std::pair<double, double>{1.0, 1.0},
                                {3.0, 0.5},
                                {0.25, 2.0}}) {
      const ProblemInstance inst = cheb::rectangle_instance(
          dims.first, dims.second, budgets.first, budgets.second,
          Vector::Zero(dims.second));
      const auto sol = cheb::solve_global(inst);
      CHECK(sol.tau_sharp == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(sol.sdp_value ==
            doctest::Approx(budgets.first * budgets.first +
                            budgets.second * budgets.second)
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("non-identity error shape is out of scope") {
  ProblemInstance inst = cheb::rectangle_instance(3, 2, 1.0, 1.0, Vector::Zero(2));
  inst.S = 2.0 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(cheb::solve_global(inst), cheb::ValidationError);
}

TEST_CASE("the map agrees with the balanced regularizer on fresh data") {
  const ProblemInstance base = cheb::random_specific(5, 3, 21);
  const auto sol = cheb::solve_global(base);
  auto g = testsup::rng(8);
  for (int k = 0; k < 10; ++k) {
    const Vector y = testsup::gaussian(g, base.m);
    ProblemInstance inst = base;
    inst.y = y;
    const auto reg = cheb::solve_cd(inst, 1.0 - sol.tau_sharp, sol.tau_sharp);
    CHECK((sol.map * y - base.Q * reg.f).norm() <= 1e-9 * (1.0 + reg.f.norm()));
  }
}

TEST_CASE("sampled worst-case error of the optimal map") {
  const ProblemInstance inst =
      cheb::rectangle_instance(2, 1, 1.0, 1.0, Vector::Zero(1));
  const auto sol = cheb::solve_global(inst);
  const double est = cheb::gwce_estimate(inst, sol.map, 8192, 19);
  // True worst case is sqrt(2): error (-e, f_2) over |f_2| <= 1, |e| <= 1.
  CHECK(est <= std::sqrt(2.0) + 1e-9);
  CHECK(est >= std::sqrt(2.0) - 1e-6);

  SUBCASE("estimates grow with nested budgets under a fixed seed") {
    const double small = cheb::gwce_estimate(inst, sol.map, 1024, 19);
    const double large = cheb::gwce_estimate(inst, sol.map, 2048, 19);
    CHECK(small <= large + 1e-15);
  }
  SUBCASE("determinism") {
    CHECK(cheb::gwce_estimate(inst, sol.map, 4096, 19) == est);
  }
}

TEST_CASE("no nearby map beats the reported one") {
  const ProblemInstance inst = cheb::random_specific(4, 2, 33);
  const auto sol = cheb::solve_global(inst);
  const double best = cheb::gwce_estimate(inst, sol.map, 4096, 5);
  auto g = testsup::rng(12);
  for (int k = 0; k < 20; ++k) {
    Matrix perturbed = sol.map;
    perturbed += 1e-2 * testsup::gaussian_matrix(g, sol.map.rows(), sol.map.cols());
    CHECK(cheb::gwce_estimate(inst, perturbed, 4096, 5) >= best - 1e-6);
  }
  // The zero map is a blunt competitor but a competitor nonetheless.
  CHECK(cheb::gwce_estimate(inst, Matrix::Zero(sol.map.rows(), sol.map.cols()),
                            4096, 5) >= best - 1e-6);
}

TEST_CASE("worst-case value matches the program value on the square") {
  // The program value bounds the squared worst-case error of the map, with
  // equality for this family; the sampler approaches it from below.
  const ProblemInstance inst =
      cheb::rectangle_instance(2, 1, 1.0, 1.0, Vector::Zero(1));
  const auto sol = cheb::solve_global(inst);
  const double est = cheb::gwce_estimate(inst, sol.map, 16384, 3);
  CHECK(est * est <= sol.sdp_value + 1e-8);
  CHECK(est * est >= sol.sdp_value - 1e-5);
}
