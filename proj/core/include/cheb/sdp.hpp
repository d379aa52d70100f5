#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cheb/impeq.hpp"
#include "cheb/model.hpp"

namespace cheb {

// Value and exact gradient of the reduced two-variable objective
//   Obj(c, d) = c (eps^2 - ||R f_{c,d}||^2) + d (eta^2 - ||S (y - Lambda f_{c,d})||^2)
// on the feasible cone {c, d >= 0 : c R^T R + d (S Lambda)^T (S Lambda) >= Q^T Q}.
// The envelope form makes the gradient free:
//   grad = (eps^2 - ||R f||^2, eta^2 - ||S (y - Lambda f)||^2).
// The value is cross-checked against the algebraic rewrite
//   c eps^2 + d eta^2 - d ||S y||^2 + d <S^T S Lambda f, y>.
struct ReducedObjective {
  double value = 0.0;
  std::array<double, 2> gradient{};
};

ReducedObjective reduced_objective(const ProblemInstance& inst, double c, double d);

struct BarrierIterate {
  double mu = 0.0;
  double c = 0.0;
  double d = 0.0;
  double objective = 0.0;
};

struct SdpSolution {
  double c = 0.0;
  double d = 0.0;
  double t = 0.0;      // recovered Schur variable d <S^T S Lambda f, y>
  double lub = 0.0;    // program value; the squared Chebyshev radius bound
  Vector center;       // Q f_{c,d}
  std::vector<BarrierIterate> trace;
};

// Two-variable log-det barrier solve of the relaxed center program.
SdpSolution solve_lub(const ProblemInstance& inst);

// Worst-case value bound at an arbitrary query point z (length q):
//   ub(z) = min over (gamma, c, d >= 0) subject to
//   [[c R^T R + d (S Lambda)^T (S Lambda) - Q^T Q,   Q^T z - d Lambda^T S^T S y],
//    [(Q^T z - d Lambda^T S^T S y)^T,  gamma - ||z||^2 - c eps^2 - d eta^2 + d ||S y||^2]] >= 0.
double s_procedure_ub(const ProblemInstance& inst, const Vector& z);

// Feasible dual certificate built from a certified primal pair (f, h) on a
// specific instance. X stacks h h^T, [[f f^T, -f], [-f^T, 1]] block
// diagonally; its objective value matches ||h||^2.
struct DualWitness {
  Matrix X;                               // order 2n + 1, PSD
  std::array<double, 3> trace_residuals{};  // against eps^2, eta^2 - ||y||^2, 1
  double slackness = 0.0;                 // <M_{c,d,t}, X>
  double lub_prime = 0.0;                 // dual objective value
};

DualWitness build_dual_witness(const ProblemInstance& inst, const Vector& f,
                               const Vector& h, double c, double d, double t);

// Runs both routes and reports their agreement. The certified route is
// attempted only on specific instances and its absence is recorded, not
// fatal.
struct ExactnessReport {
  double lub = 0.0;
  double radius_sdp = 0.0;
  std::optional<double> radius_impeq;
  std::optional<double> duality_gap;  // lub - lub'
  std::optional<double> slackness;
  std::optional<bool> agree;
  std::string fallback_reason;  // empty when the certified route succeeded
};

ExactnessReport exactness_report(const ProblemInstance& inst);

}  // namespace cheb
