#pragma once

#include <optional>

#include "cheb/model.hpp"

namespace cheb {

// Minimizer of c ||R f||^2 + d ||S (y - Lambda f)||^2, the workhorse of both
// solution routes. Stationarity reads
//   c R^T R f + d Lambda^T S^T S (Lambda f - y) = 0,
// and the solve is (c R^T R + d Lambda^T S^T S Lambda) f = d Lambda^T S^T S y.
struct RegularizedSolution {
  Vector f;
  double c = 0.0;
  double d = 0.0;
  std::optional<double> tau;       // set when produced via solve_tau
  double residual = 0.0;           // stationarity residual norm
  double model_norm = 0.0;         // ||R f||
  double misfit_norm = 0.0;        // ||S (y - Lambda f)||
  bool degenerate = false;         // minimal-norm branch was taken
};

// Weights must be nonnegative and not both zero.
RegularizedSolution solve_cd(const ProblemInstance& inst, double c, double d);

// Convex-combination parametrization f_tau with weights (1 - tau, tau),
// tau strictly inside (0, 1).
RegularizedSolution solve_tau(const ProblemInstance& inst, double tau);

// delta = min{||P f|| : Lambda f = y}, which for specific instances equals
// min{||Lambda f - y|| : P f = 0}. Both routes are computed from scratch
// (kernel bases + least squares) and must agree to tols().delta_agree.
struct DeltaResult {
  double delta = 0.0;
  double delta_alt = 0.0;       // second-route value
  Vector interpolant;           // argmin of the first program
  Vector model_consistent;      // argmin of the second program
};

DeltaResult compute_delta(const ProblemInstance& inst);

// || f_t2 - affine interpolation of (f_t1, f_t3) at t2 ||. On specific
// instances the regularization path is affine in tau, so this vanishes.
double affine_path_check(const ProblemInstance& inst, double t1, double t2, double t3);

}  // namespace cheb
