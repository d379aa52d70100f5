#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cheb/presets.hpp"
#include "cheb/regularize.hpp"
#include "test_support.hpp"

using cheb::ProblemInstance;
using cheb::Vector;

namespace {

// Objective the solver claims to minimize; evaluated from scratch.
double objective(const ProblemInstance& inst, double c, double d, const Vector& f) {
  return c * (inst.R * f).squaredNorm() +
         d * (inst.S * (inst.y - inst.Lambda * f)).squaredNorm();
}

}  // namespace

TEST_CASE("balanced weights on the canonical instances") {
  SUBCASE("zero data gives the zero recovery") {
    const auto sol = cheb::solve_cd(cheb::rec1(), 1.0, 1.0);
    CHECK(sol.f.norm() <= 1e-14);
    CHECK(sol.model_norm <= 1e-14);
    CHECK(sol.misfit_norm <= 1e-14);
    CHECK(sol.residual <= 1e-14);
  }
  SUBCASE("observed coordinate is reproduced exactly") {
    const auto sol = cheb::solve_cd(cheb::rec2(), 1.0, 1.0);
    CHECK(sol.f[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(sol.f[1]) <= 1e-14);
  }
  SUBCASE("pure data fitting returns the observations") {
    const auto sol = cheb::solve_cd(cheb::ball1(), 0.0, 1.0);
    CHECK((sol.f - cheb::ball1().y).norm() <= 1e-12);
    CHECK(sol.misfit_norm <= 1e-12);
  }
}

TEST_CASE("tau parametrization") {
  SUBCASE("flat path when the data is already model-consistent") {
    for (const double tau : {0.25, 0.5, 0.75}) {
      const auto sol = cheb::solve_tau(cheb::rec2(), tau);
      REQUIRE(sol.tau.has_value());
      CHECK(*sol.tau == tau);
      CHECK(sol.f[0] == doctest::Approx(0.3).epsilon(1e-12));
      CHECK(std::abs(sol.f[1]) <= 1e-13);
    }
  }
  SUBCASE("balanced point of the slab instance") {
    const auto sol = cheb::solve_tau(cheb::ball1(), 0.5);
    CHECK(sol.f[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(sol.f[1]) <= 1e-14);
  }
  SUBCASE("endpoints are rejected") {
    CHECK_THROWS_AS(cheb::solve_tau(cheb::rec1(), 0.0), cheb::ValidationError);
    CHECK_THROWS_AS(cheb::solve_tau(cheb::rec1(), 1.0), cheb::ValidationError);
  }
  SUBCASE("weights must be usable") {
    CHECK_THROWS_AS(cheb::solve_cd(cheb::rec1(), -1.0, 1.0), cheb::ValidationError);
    CHECK_THROWS_AS(cheb::solve_cd(cheb::rec1(), 0.0, 0.0), cheb::ValidationError);
  }
}

TEST_CASE("stationarity holds at the reported solution") {
  auto g = testsup::rng(77);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const ProblemInstance inst = cheb::random_specific(5, 2, 100 + trial);
    const double c = weight(g);
    const double d = weight(g);
    const auto sol = cheb::solve_cd(inst, c, d);
    const Vector stat = c * inst.gram_model() * sol.f +
                        d * (inst.gram_data() * sol.f - inst.data_pullback());
    CHECK(stat.norm() <= 1e-9 * (1.0 + sol.f.norm()));
    CHECK(sol.residual <= 1e-9 * (1.0 + sol.f.norm()));
    CHECK(sol.model_norm == doctest::Approx((inst.R * sol.f).norm()).epsilon(1e-12));
  }
}

TEST_CASE("no nearby point improves the objective") {
  auto g = testsup::rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance inst = cheb::random_specific(4, 2, 200 + trial);
    const auto sol = cheb::solve_cd(inst, 0.7, 1.3);
    const double at_solution = objective(inst, 0.7, 1.3, sol.f);
    for (int k = 0; k < 20; ++k) {
      Vector u = testsup::gaussian(g, inst.n);
      u *= 1e-3 / u.norm();
      CHECK(objective(inst, 0.7, 1.3, sol.f + u) >= at_solution - 1e-12);
    }
  }
}

TEST_CASE("minimal model distance, two independent programs") {
  SUBCASE("consistent data has distance zero") {
    const auto res = cheb::compute_delta(cheb::rec1());
    CHECK(res.delta <= 1e-12);
    CHECK(res.delta_alt <= 1e-12);
  }
  SUBCASE("slab instance") {
    const auto res = cheb::compute_delta(cheb::ball1());
    CHECK(res.delta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.delta_alt == doctest::Approx(0.5).epsilon(1e-12));
    // The interpolant must actually interpolate and the alternative point
    // must actually sit in the model kernel.
    const auto inst = cheb::ball1();
    CHECK((inst.Lambda * res.interpolant - inst.y).norm() <= 1e-12);
    CHECK((inst.R * res.model_consistent).norm() <= 1e-12);
  }
  SUBCASE("the two routes agree on random instances") {
    for (int trial = 0; trial < 25; ++trial) {
      const ProblemInstance inst = cheb::random_specific(6, 3, 300 + trial);
      const auto res = cheb::compute_delta(inst);
      CHECK(std::abs(res.delta - res.delta_alt) <= 1e-9 * (1.0 + res.delta));
      CHECK((inst.Lambda * res.interpolant - inst.y).norm() <=
            1e-9 * (1.0 + inst.y.norm()));
      CHECK((inst.R * res.model_consistent).norm() <= 1e-9);
      // Optimality of the first program: project a few competitors.
      auto g = testsup::rng(static_cast<std::uint64_t>(trial));
      for (int k = 0; k < 5; ++k) {
        // Any other interpolant has model norm >= delta.
        Vector h = testsup::gaussian(g, inst.n);
        const Vector dir = h - inst.Lambda.transpose() * (inst.Lambda * h);
        const Vector competitor = res.interpolant + dir;
        CHECK((inst.Lambda * competitor - inst.y).norm() <= 1e-8 * (1.0 + inst.y.norm()));
        CHECK((inst.R * competitor).norm() >= res.delta - 1e-9);
      }
    }
  }
  SUBCASE("general instances are refused") {
    CHECK_THROWS_AS(cheb::compute_delta(cheb::random_general(4, 2, 1)),
                    cheb::ValidationError);
  }
}

TEST_CASE("the weight path is affine in tau") {
  CHECK(cheb::affine_path_check(cheb::rec2(), 0.25, 0.5, 0.75) <= 1e-12);
  CHECK(cheb::affine_path_check(cheb::ball1(), 0.25, 0.5, 0.75) <= 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    const ProblemInstance inst = cheb::random_specific(5, 3, 400 + trial);
    const double dev = cheb::affine_path_check(inst, 0.2, 0.45, 0.9);
    const double scale = 1.0 + cheb::solve_tau(inst, 0.45).f.norm();
    CHECK(dev <= 1e-8 * scale);
  }
  CHECK_THROWS_AS(cheb::affine_path_check(cheb::rec1(), 0.5, 0.4, 0.8),
                  cheb::ValidationError);
}

TEST_CASE("affine interpolation reproduces the middle solution exactly") {
  // Independent spell-out of what affine_path_check measures.
  const ProblemInstance inst = cheb::ball1();
  const Vector f1 = cheb::solve_tau(inst, 0.25).f;
  const Vector f2 = cheb::solve_tau(inst, 0.5).f;
  const Vector f3 = cheb::solve_tau(inst, 0.75).f;
  const double w = (0.5 - 0.25) / (0.75 - 0.25);
  CHECK((f2 - (f1 + w * (f3 - f1))).norm() ==
        doctest::Approx(cheb::affine_path_check(inst, 0.25, 0.5, 0.75)).epsilon(1e-12));
}
