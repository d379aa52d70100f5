#pragma once

#include <array>

#include "cheb/regularize.hpp"

namespace cheb {

// Optimality certificate for the candidate (f, h) at weights
// c = (1 - tau)/lambda_min, d = tau/lambda_min:
//   (a) c P + d Lambda^T Lambda >= Id           (as quadratic forms)
//   (b) c P f + d Lambda^T (Lambda f - y) + (c P + d Lambda^T Lambda) h = h
//   (c) <P f, h> = 0 and <Lambda^T (Lambda f - y), h> = 0
//   (d) ||P f + P h||^2 = epsilon^2 and ||Lambda f - y + Lambda h||^2 = eta^2
// All residuals are evaluated on the full expressions; nothing is assumed.
struct CertificateABCD {
  double a_min_eig = 0.0;             // lambda_min(c P + d Lambda^T Lambda - Id)
  double res_b = 0.0;                 // norm of the (b) defect
  std::array<double, 2> res_c{};      // the two inner products
  std::array<double, 2> res_d{};      // defects of the two norm equalities
  double tolerance = 0.0;             // threshold used for `passed`
  bool passed = false;
};

struct ImpeqSolution {
  double tau_sharp = 0.0;
  double lambda_min = 0.0;
  double c_sharp = 0.0;
  double d_sharp = 0.0;
  Vector f_sharp;
  Vector h_sharp;
  double radius = 0.0;  // ||h_sharp||
  CertificateABCD certificate;
};

// Scalar residual of the eigenvalue identity at tau:
//   lambda_min((1-tau) P + tau Lambda^T Lambda)
//     - [(1-tau)^2 eps^2 - tau^2 eta^2] /
//       [(1-tau) eps^2 - tau eta^2 + (1-tau) tau (1-2 tau) delta^2].
// At a point where the denominator vanishes the ratio is returned only if the
// numerator vanishes too (removable case, value via the cleared form);
// otherwise a SolverError ("pole") is raised carrying tau.
double impeq_residual(const ProblemInstance& inst, double delta, double tau);

// Certified root search on the closed bracket between 1/2 and
// eps/(eps + eta): dense pre-scan of the cleared residual, safeguarded
// Newton/bisection refinement, then certificate-gated acceptance in
// ascending tau order. Throws SolverError("no certified root ...") when no
// candidate passes; callers fall back to the relaxation route.
ImpeqSolution solve_impeq(const ProblemInstance& inst);

CertificateABCD certify_abcd(const ProblemInstance& inst, double tau, const Vector& f,
                             const Vector& h);

}  // namespace cheb
