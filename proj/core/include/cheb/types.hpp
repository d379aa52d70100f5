#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cheb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input: shapes, non-finite entries, violated structural assumptions.
struct ValidationError : Error {
  using Error::Error;
};

// A solver could not produce a usable answer (no certified root, empty
// interior, pole hit during root finding, infeasible query point).
struct SolverError : Error {
  using Error::Error;
};

// An internal numerical contract was violated (inconsistent singular system,
// cross-check mismatch). These indicate bugs or pathological conditioning,
// not user error.
struct NumericalError : Error {
  using Error::Error;
};

// File and JSON problems.
struct IoError : Error {
  using Error::Error;
};

// Every tolerance used by the library, in one place. Values are part of the
// contract of the operations that quote them; tests pin behavior against
// these exact numbers.
struct Tolerances {
  // linalg
  double symmetry_rel = 1e-12;       // |a_ij - a_ji| <= this * (1 + max|entry|)
  double eig_group_rel = 1e-8;       // eigenvalue grouping, relative to ||A||_2
  double eig_residual_rel = 1e-10;   // ||Av - lambda v|| <= this * ||A||
  double eig_reconstruct_rel = 1e-9; // ||A - V L V^T|| <= this * ||A||
  double spd_rank_rel = 1e-10;       // exact-solve branch when lambda_min > this * ||A||
  double spd_residual_rel = 1e-9;    // exact-solve residual bound, relative to ||b||
  double inconsistent_rel = 1e-8;    // singular solve consistency, relative to 1 + ||b||
  double psd_rel = 1e-9;             // PSD check: lambda_min >= -this * (1 + ||A||)

  // model
  double projector_abs = 1e-10;      // ||P^2 - P||_max and ||P - P^T||_max
  double row_orthonormal_abs = 1e-10;// ||Lambda Lambda^T - I||_max
  double identity_abs = 1e-12;       // S == Id, Q == Id detection
  double kernel_min_eig = 1e-10;     // lambda_min(R^T R + Lambda^T S^T S Lambda) must exceed this
  double dependent_basis_rel = 1e-12;// subspace basis rank check

  // regularize
  double reg_residual_rel = 1e-8;    // stationarity residual, relative to scale
  double delta_agree = 1e-9;         // |delta - delta'| <= this * (1 + delta)
  double affine_residual = 1e-8;     // affine path residual, relative to max ||f_tau||

  // impeq
  double impeq_pole_abs = 1e-12;     // denominator magnitude treated as a pole
  double impeq_root_abs = 1e-10;     // accepted |residual| at a refined root
  double certificate_rel = 1e-7;     // certificate residuals, times (1 + eps^2 + eta^2)
  int bracket_scan_points = 200;

  // sdp
  double barrier_mu_init = 1.0;
  double barrier_mu_min = 1e-10;
  double barrier_mu_factor = 10.0;
  double newton_decrement_tol = 1e-10;
  int newton_max_iter = 60;
  double axis_polish_abs = 1e-8;     // project c or d to 0 when below this
  double objective_crosscheck_rel = 1e-9;
  double lub_consistency_abs = 1e-9;
  double dual_trace_abs = 1e-7;
  double slackness_abs = 1e-8;
  double weak_duality_abs = 1e-8;
  double route_agree_rel = 1e-6;     // |sqrt(lub) - radius| <= this * (1 + radius)

  // oracle
  double feasible_slack_abs = -1e-9; // sample slacks may not dip below this
  double sandwich_gap_rel = 0.02;
  int ascent_max_iter = 100;
  int projection_max_iter = 100;

  // global
  double gwce_compare_abs = 1e-6;
};

// Shared immutable defaults.
const Tolerances& tols();

}  // namespace cheb
