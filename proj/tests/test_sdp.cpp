#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cheb/linalg.hpp"
#include "cheb/oracle.hpp"
#include "cheb/presets.hpp"
#include "cheb/sdp.hpp"
#include "test_support.hpp"

using cheb::Matrix;
using cheb::ProblemInstance;
using cheb::SymMatrix;
using cheb::Vector;

TEST_CASE("reduced objective at pinned weights") {
  // rec1 at (2, 2): the regularized point is 0, so the value is
  // 2 * eps^2 + 2 * eta^2 = 4.
  const auto at22 = cheb::reduced_objective(cheb::rec1(), 2.0, 2.0);
  CHECK(at22.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(at22.gradient[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at22.gradient[1] == doctest::Approx(1.0).epsilon(1e-12));

  // ball1 at (0, 1): pure data fit, value eta^2 = 1.
  const auto at01 = cheb::reduced_objective(cheb::ball1(), 0.0, 1.0);
  CHECK(at01.value == doctest::Approx(1.0).epsilon(1e-12));

  // Weights inside the forbidden region of the cone must be refused.
  CHECK_THROWS_AS(cheb::reduced_objective(cheb::rec1(), 0.5, 0.5),
                  cheb::SolverError);
  CHECK_THROWS_AS(cheb::reduced_objective(cheb::rec1(), -1.0, 2.0),
                  cheb::ValidationError);
}

TEST_CASE("reduced objective gradient matches finite differences") {
  auto g = testsup::rng(55);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance inst = cheb::random_specific(4, 2, 600 + trial);
    // Scale (1,1) outward until strictly feasible, then move a bit further
    // so the finite-difference stencil stays inside the cone.
    double s = 1.0;
    const Matrix q = inst.Q.transpose() * inst.Q;
    while (cheb::min_eigenvalue(SymMatrix(
               s * (inst.gram_model() + inst.gram_data()) - q)) < 0.1)
      s *= 2.0;
    const double c = s * (1.0 + bump(g));
    const double d = s * (1.0 + bump(g));
    const auto obj = cheb::reduced_objective(inst, c, d);
    const auto fd = testsup::fd_gradient2(
        [&](double cc, double dd) {
          return cheb::reduced_objective(inst, cc, dd).value;
        },
        c, d, 1e-5 * (1.0 + c), 1e-5 * (1.0 + d));
    CHECK(obj.gradient[0] == doctest::Approx(fd[0]).epsilon(1e-5));
    CHECK(obj.gradient[1] == doctest::Approx(fd[1]).epsilon(1e-5));
  }
}

TEST_CASE("reduced objective is convex along random segments") {
  auto g = testsup::rng(66);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  const ProblemInstance inst = cheb::random_specific(5, 2, 42);
  double s = 1.0;
  const Matrix q = inst.Q.transpose() * inst.Q;
  while (cheb::min_eigenvalue(
             SymMatrix(s * (inst.gram_model() + inst.gram_data()) - q)) < 0.1)
    s *= 2.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double c1 = s * (1.0 + bump(g)), d1 = s * (1.0 + bump(g));
    const double c2 = s * (1.0 + bump(g)), d2 = s * (1.0 + bump(g));
    const double mid = cheb::reduced_objective(inst, 0.5 * (c1 + c2), 0.5 * (d1 + d2)).value;
    const double ends = 0.5 * cheb::reduced_objective(inst, c1, d1).value +
                        0.5 * cheb::reduced_objective(inst, c2, d2).value;
    CHECK(mid <= ends + 1e-9 * (1.0 + std::abs(ends)));
  }
}

TEST_CASE("relaxed center program on the canonical instances") {
  SUBCASE("unit square") {
    const auto sol = cheb::solve_lub(cheb::rec1());
    CHECK(sol.lub == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(sol.center.norm() <= 1e-6);
    CHECK_FALSE(sol.trace.empty());
  }
  SUBCASE("asymmetric rectangle") {
    const auto sol = cheb::solve_lub(cheb::rec2());
    CHECK(sol.lub == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(sol.center[0] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(std::abs(sol.center[1]) <= 1e-6);
    // Schur variable d <Lambda f, y> at the optimum: 1 * 0.3 * 0.3.
    CHECK(sol.t == doctest::Approx(0.09).epsilon(1e-6));
  }
  SUBCASE("inactive slab collapses to the data ball") {
    const auto sol = cheb::solve_lub(cheb::ball1());
    CHECK(sol.lub == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.c <= 1e-6);
    CHECK(sol.d == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.center[0] == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("optimal weights sit on the cone boundary") {
  // Strict interiority would contradict optimality: shrinking either weight
  // lowers the objective until the matrix inequality bites.
  for (int trial = 0; trial < 8; ++trial) {
    const ProblemInstance inst = cheb::random_specific(5, 3, 700 + trial);
    const auto sol = cheb::solve_lub(inst);
    const Matrix a = sol.c * inst.gram_model() + sol.d * inst.gram_data() -
                     inst.Q.transpose() * inst.Q;
    CHECK(cheb::min_eigenvalue(SymMatrix(a)) <= 1e-6 * (1.0 + sol.c + sol.d));
  }
}

TEST_CASE("two-variable elimination agrees with the direct three-variable solve") {
  // The library optimizes (c, d) with the Schur variable eliminated; the
  // reference solver keeps (c, d, t) and both matrix blocks explicit. Same
  // optimum both ways, or the elimination is wrong.
  for (int trial = 0; trial < 12; ++trial) {
    const ProblemInstance inst = cheb::random_specific(4, 2, 800 + trial);
    const auto fast = cheb::solve_lub(inst);
    const auto direct = testsup::direct_sdp(inst);
    CHECK(fast.lub == doctest::Approx(direct.value).epsilon(1e-7));
    CHECK(fast.c == doctest::Approx(direct.c).epsilon(1e-4));
    CHECK(fast.d == doctest::Approx(direct.d).epsilon(1e-4));
  }
  for (int trial = 0; trial < 8; ++trial) {
    const ProblemInstance inst = cheb::random_general(4, 3, 900 + trial);
    const auto fast = cheb::solve_lub(inst);
    const auto direct = testsup::direct_sdp(inst);
    CHECK(fast.lub == doctest::Approx(direct.value).epsilon(1e-7));
  }
}

TEST_CASE("pointwise worst-case bound") {
  const ProblemInstance inst = cheb::rec1();
  SUBCASE("at the optimal center it reproduces the radius bound") {
    const Vector z = Vector::Zero(2);
    CHECK(cheb::s_procedure_ub(inst, z) == doctest::Approx(2.0).epsilon(1e-7));
  }
  SUBCASE("off-center queries pay the full corner distance") {
    Vector z(2);
    z << 0.5, 0.0;
    // Farthest corner of the square from (0.5, 0) is (-1, +-1):
    // squared distance 2.25 + 1 = 3.25. The bound can only exceed it.
    const double ub = cheb::s_procedure_ub(inst, z);
    CHECK(ub >= 3.25 - 1e-9);
    CHECK(ub == doctest::Approx(3.25).epsilon(1e-6));
  }
  SUBCASE("wrong query length is rejected") {
    CHECK_THROWS_AS(cheb::s_procedure_ub(inst, Vector::Zero(3)), cheb::ValidationError);
  }
}

TEST_CASE("sampled lower bounds never cross the pointwise bound") {
  auto g = testsup::rng(91);
  for (int trial = 0; trial < 6; ++trial) {
    const ProblemInstance inst = cheb::random_specific(4, 2, 1000 + trial);
    const Vector z = testsup::gaussian(g, inst.n);
    const double ub = cheb::s_procedure_ub(inst, z);
    const auto oracle = cheb::sv_lower_bound(inst, z, 20000, 10, 77);
    CHECK(oracle.sv_lower <= ub + 1e-6 * (1.0 + ub));
  }
}

TEST_CASE("dual witness from the certified primal pair") {
  const ProblemInstance inst = cheb::rec1();
  Vector f = Vector::Zero(2);
  Vector h(2);
  h << 1.0, 1.0;
  const double t = 0.0;  // d <Lambda f, y> with f = y = 0

  const auto witness = cheb::build_dual_witness(inst, f, h, 1.0, 1.0, t);
  CHECK(witness.lub_prime == doctest::Approx(2.0).epsilon(1e-12));
  for (const double r : witness.trace_residuals) CHECK(std::abs(r) <= 1e-12);
  CHECK(std::abs(witness.slackness) <= 1e-12);
  CHECK(witness.X.rows() == 5);
  CHECK(cheb::is_psd(SymMatrix(witness.X)));

  SUBCASE("perturbing the Schur variable shows up in the slackness") {
    // X has a unit entry against the slack matrix's t slot, so shifting t by
    // 0.1 shifts <M, X> by exactly 0.1.
    const auto off = cheb::build_dual_witness(inst, f, h, 1.0, 1.0, t + 0.1);
    CHECK(off.slackness == doctest::Approx(witness.slackness + 0.1).epsilon(1e-9));
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(cheb::build_dual_witness(inst, Vector::Zero(3), h, 1.0, 1.0, t),
                    cheb::ValidationError);
    CHECK_THROWS_AS(
        cheb::build_dual_witness(cheb::random_general(3, 2, 4), f, h, 1.0, 1.0, t),
        cheb::ValidationError);
  }
}

TEST_CASE("weak duality holds across random certified instances") {
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance inst = cheb::random_specific(5, 2, 1100 + trial);
    const auto primal = cheb::solve_lub(inst);
    const auto certified = cheb::solve_impeq(inst);
    const double t = certified.d_sharp * (inst.Lambda * certified.f_sharp).dot(inst.y);
    const auto witness =
        cheb::build_dual_witness(inst, certified.f_sharp, certified.h_sharp,
                                 certified.c_sharp, certified.d_sharp, t);
    CHECK(witness.lub_prime <= primal.lub + 1e-8 * (1.0 + primal.lub));
    CHECK(witness.lub_prime ==
          doctest::Approx(certified.radius * certified.radius).epsilon(1e-10));
  }
}

TEST_CASE("route agreement report") {
  SUBCASE("both routes agree on the rectangles") {
    for (const ProblemInstance& inst : {cheb::rec1(), cheb::rec2()}) {
      const auto report = cheb::exactness_report(inst);
      CHECK(report.fallback_reason.empty());
      REQUIRE(report.radius_impeq.has_value());
      CHECK(report.radius_sdp ==
            doctest::Approx(*report.radius_impeq).epsilon(1e-7));
      REQUIRE(report.agree.has_value());
      CHECK(*report.agree);
      REQUIRE(report.duality_gap.has_value());
      CHECK(std::abs(*report.duality_gap) <= 1e-7 * (1.0 + report.lub));
    }
  }
  SUBCASE("the declined instance reports its fallback") {
    const auto report = cheb::exactness_report(cheb::ball1());
    CHECK_FALSE(report.fallback_reason.empty());
    CHECK_FALSE(report.radius_impeq.has_value());
    CHECK(report.radius_sdp == doctest::Approx(1.0).epsilon(1e-7));
  }
}
