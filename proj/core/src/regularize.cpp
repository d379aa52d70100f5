#include "cheb/regularize.hpp"

#include <cmath>
#include <sstream>

namespace cheb {

RegularizedSolution solve_cd(const ProblemInstance& inst, double c, double d) {
  if (!(c >= 0.0) || !(d >= 0.0))
    throw ValidationError("solve_cd: weights must be nonnegative");
  if (c == 0.0 && d == 0.0)
    throw ValidationError("solve_cd: weights must not both vanish");

  const Matrix a = c * inst.gram_model() + d * inst.gram_data();
  const Vector b = d * inst.data_pullback();
  const SpdSolution sol = solve_spd(SymMatrix(a), b, true);

  RegularizedSolution out;
  out.f = sol.x;
  out.c = c;
  out.d = d;
  out.degenerate = sol.degenerate;
  out.model_norm = (inst.R * out.f).norm();
  out.misfit_norm = (inst.S * (inst.y - inst.Lambda * out.f)).norm();
  const Vector stat = c * (inst.gram_model() * out.f) +
                      d * (inst.gram_data() * out.f - inst.data_pullback());
  out.residual = stat.norm();
  return out;
}

RegularizedSolution solve_tau(const ProblemInstance& inst, double tau) {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    std::ostringstream os;
    os << "solve_tau: tau must lie strictly inside (0, 1), got " << tau;
    throw ValidationError(os.str());
  }
  RegularizedSolution out = solve_cd(inst, 1.0 - tau, tau);
  out.tau = tau;
  return out;
}

namespace {

// Orthonormal basis of the (near-)null space of a PSD gram matrix.
Matrix kernel_basis(const Matrix& gram) {
  const Spectrum spec = eig_sym(SymMatrix(gram));
  const double cutoff = 1e-10 * (1.0 + spec.norm2);
  Eigen::Index count = 0;
  for (const auto& g : spec.groups)
    if (std::abs(g.value) <= cutoff) count += g.multiplicity();
  Matrix basis(gram.rows(), count);
  Eigen::Index at = 0;
  for (const auto& g : spec.groups) {
    if (std::abs(g.value) > cutoff) continue;
    basis.middleCols(at, g.multiplicity()) = g.vectors;
    at += g.multiplicity();
  }
  return basis;
}

}  // namespace

DeltaResult compute_delta(const ProblemInstance& inst) {
  const ValidationReport report = validate(inst);
  if (!report.specific())
    throw ValidationError("compute_delta: requires a specific instance");

  DeltaResult out;
  const Matrix& p = inst.R;  // projector in the specific case

  // Route 1: min ||P f|| over the interpolation space Lambda f = y.
  // Lambda has orthonormal rows, so Lambda^T y interpolates and the
  // remaining freedom is ker(Lambda).
  {
    const Vector f0 = inst.Lambda.transpose() * inst.y;
    const Matrix nker = kernel_basis(inst.Lambda.transpose() * inst.Lambda);
    if (nker.cols() == 0) {
      out.interpolant = f0;
    } else {
      const Matrix pn = p * nker;
      const Matrix gram = pn.transpose() * pn;
      const Vector rhs = -pn.transpose() * (p * f0);
      const SpdSolution z = solve_spd(SymMatrix(gram), rhs, true);
      out.interpolant = f0 + nker * z.x;
    }
    out.delta = (p * out.interpolant).norm();
  }

  // Route 2: min ||Lambda f - y|| over the model-consistent space P f = 0.
  {
    const Matrix mker = kernel_basis(p.transpose() * p);
    if (mker.cols() == 0) {
      out.model_consistent = Vector::Zero(inst.n);
    } else {
      const Matrix lm = inst.Lambda * mker;
      const Matrix gram = lm.transpose() * lm;
      const Vector rhs = lm.transpose() * inst.y;
      const SpdSolution w = solve_spd(SymMatrix(gram), rhs, true);
      out.model_consistent = mker * w.x;
    }
    out.delta_alt = (inst.Lambda * out.model_consistent - inst.y).norm();
  }

  if (std::abs(out.delta - out.delta_alt) > tols().delta_agree * (1.0 + out.delta)) {
    std::ostringstream os;
    os << "compute_delta: route disagreement " << out.delta << " vs " << out.delta_alt;
    throw NumericalError(os.str());
  }
  return out;
}

double affine_path_check(const ProblemInstance& inst, double t1, double t2, double t3) {
  if (!(t1 < t2 && t2 < t3))
    throw ValidationError("affine_path_check: need t1 < t2 < t3");
  const Vector f1 = solve_tau(inst, t1).f;
  const Vector f2 = solve_tau(inst, t2).f;
  const Vector f3 = solve_tau(inst, t3).f;
  const double w = (t3 - t2) / (t3 - t1);
  const Vector interp = w * f1 + (1.0 - w) * f3;
  return (f2 - interp).norm();
}

}  // namespace cheb
