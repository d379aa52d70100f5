#include "cheb/sdp.hpp"

#include <cmath>
#include <sstream>

#include "barrier.hpp"
#include "cheb/regularize.hpp"

namespace cheb {

namespace {

// Objective pieces shared by solve_lub and reduced_objective. No feasibility
// check here; the public entry point performs it.
struct ObjParts {
  double value = 0.0;
  std::array<double, 2> gradient{};
  double rewrite = 0.0;  // c eps^2 + d eta^2 - d ||Sy||^2 + t
  double t = 0.0;        // d <S^T S Lambda f, y>
  Vector f;
};

ObjParts objective_parts(const ProblemInstance& inst, double c, double d) {
  const RegularizedSolution reg = solve_cd(inst, c, d);
  ObjParts out;
  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  out.gradient = {e2 - reg.model_norm * reg.model_norm,
                  n2 - reg.misfit_norm * reg.misfit_norm};
  out.value = c * out.gradient[0] + d * out.gradient[1];
  out.t = d * (inst.S * (inst.Lambda * reg.f)).dot(inst.S * inst.y);
  out.rewrite = c * e2 + d * n2 - d * (inst.S * inst.y).squaredNorm() + out.t;
  out.f = reg.f;
  return out;
}

detail::BarrierSpec lub_spec(const ProblemInstance& inst) {
  detail::BarrierSpec spec;
  spec.G0 = inst.Q.transpose() * inst.Q;
  spec.G1 = inst.gram_model();
  spec.G2 = inst.gram_data();
  spec.value = [&inst](double c, double d) {
    return objective_parts(inst, c, d).value;
  };
  spec.gradient = [&inst](double c, double d) {
    return objective_parts(inst, c, d).gradient;
  };
  // With f* the inner maximizer, the eliminated objective has the exact
  // Hessian 2 J^T B^{-1} J for J = [G1 f*, G2 f* - pullback] and
  // B = c G1 + d G2 (positive semidefinite automatically, as it must be for
  // a partially minimized convex program).
  spec.hessian = [&inst](double c, double d) -> std::array<double, 3> {
    const Vector f = solve_cd(inst, c, d).f;
    const SymMatrix b(c * inst.gram_model() + d * inst.gram_data());
    const Vector j1 = inst.gram_model() * f;
    const Vector j2 = inst.gram_data() * f - inst.data_pullback();
    const Vector s1 = pinv_apply(b, j1);
    const Vector s2 = pinv_apply(b, j2);
    return {2.0 * j1.dot(s1), 2.0 * j1.dot(s2), 2.0 * j2.dot(s2)};
  };
  return spec;
}

}  // namespace

ReducedObjective reduced_objective(const ProblemInstance& inst, double c, double d) {
  if (!(c >= 0.0 && d >= 0.0))
    throw ValidationError("reduced_objective: weights must be nonnegative");
  const Matrix m =
      c * inst.gram_model() + d * inst.gram_data() - inst.Q.transpose() * inst.Q;
  const Spectrum spec = eig_sym(SymMatrix(m));
  if (spec.min_value() < -tols().psd_rel * (1.0 + spec.norm2)) {
    std::ostringstream os;
    os << "reduced_objective: (c, d) infeasible, lambda_min deficit " << spec.min_value();
    throw SolverError(os.str());
  }
  const ObjParts parts = objective_parts(inst, c, d);
  const double scale = 1.0 + std::abs(parts.value);
  if (std::abs(parts.value - parts.rewrite) > tols().objective_crosscheck_rel * scale) {
    std::ostringstream os;
    os << "reduced_objective: rewrite mismatch " << parts.value << " vs " << parts.rewrite;
    throw NumericalError(os.str());
  }
  return {parts.value, parts.gradient};
}

SdpSolution solve_lub(const ProblemInstance& inst) {
  validate(inst);
  const detail::BarrierSpec spec = lub_spec(inst);
  detail::BarrierOutcome run = detail::barrier_minimize(spec);
  detail::polish_axes(spec, run.c, run.d);

  const ObjParts parts = objective_parts(inst, run.c, run.d);
  SdpSolution out;
  out.c = run.c;
  out.d = run.d;
  out.t = parts.t;
  out.lub = parts.value;
  out.center = inst.Q * parts.f;
  out.trace = std::move(run.trace);

  if (std::abs(parts.value - parts.rewrite) >
      tols().lub_consistency_abs * (1.0 + std::abs(parts.value)))
    throw NumericalError("solve_lub: objective rewrite inconsistency");
  return out;
}

double s_procedure_ub(const ProblemInstance& inst, const Vector& z) {
  validate(inst);
  if (z.size() != inst.Q.rows())
    throw ValidationError("s_procedure_ub: query point has wrong length");

  detail::BarrierSpec spec;
  spec.G0 = inst.Q.transpose() * inst.Q;
  spec.G1 = inst.gram_model();
  spec.G2 = inst.gram_data();
  const Vector pullback = inst.data_pullback();
  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  const double sy2 = (inst.S * inst.y).squaredNorm();
  const double z2 = z.squaredNorm();

  // Inner maximizer of the homogenized quadratic; Danskin again supplies the
  // exact gradient. pinv_apply rather than solve_spd: at the optimum the
  // pencil is singular with the right-hand side in its range, and the
  // projected solve is the correct variational limit when rounding pushes a
  // few parts in 1e8 of the right-hand side outside.
  auto inner = [&](double c, double d) {
    const Matrix m = c * spec.G1 + d * spec.G2 - spec.G0;
    const Vector w = inst.Q.transpose() * z - d * pullback;
    return Vector(pinv_apply(SymMatrix(m), -w));
  };
  spec.value = [&, z2](double c, double d) {
    const Vector f = inner(c, d);
    return z2 + c * e2 + d * n2 - d * sy2 -
           (inst.Q.transpose() * z - d * pullback).dot(f);
  };
  spec.gradient = [&](double c, double d) -> std::array<double, 2> {
    const Vector f = inner(c, d);
    return {e2 - (inst.R * f).squaredNorm(),
            n2 - (inst.S * (inst.y - inst.Lambda * f)).squaredNorm()};
  };
  spec.hessian = [&](double c, double d) -> std::array<double, 3> {
    const Vector f = inner(c, d);
    const SymMatrix m(c * spec.G1 + d * spec.G2 - spec.G0);
    const Vector j1 = spec.G1 * f;
    const Vector j2 = spec.G2 * f - pullback;
    const Vector s1 = pinv_apply(m, j1);
    const Vector s2 = pinv_apply(m, j2);
    return {2.0 * j1.dot(s1), 2.0 * j1.dot(s2), 2.0 * j2.dot(s2)};
  };

  const detail::BarrierOutcome run = detail::barrier_minimize(spec);
  return spec.value(run.c, run.d);
}

DualWitness build_dual_witness(const ProblemInstance& inst, const Vector& f,
                               const Vector& h, double c, double d, double t) {
  const ValidationReport report = validate(inst);
  if (!report.specific())
    throw ValidationError("build_dual_witness: requires a specific instance");
  const Eigen::Index n = inst.n;
  if (f.size() != n || h.size() != n)
    throw ValidationError("build_dual_witness: vector length mismatch");

  const Eigen::Index order = 2 * n + 1;
  DualWitness out;
  out.X = Matrix::Zero(order, order);
  out.X.topLeftCorner(n, n) = h * h.transpose();
  out.X.block(n, n, n, n) = f * f.transpose();
  out.X.block(n, 2 * n, n, 1) = -f;
  out.X.block(2 * n, n, 1, n) = -f.transpose();
  out.X(2 * n, 2 * n) = 1.0;

  const Matrix p = inst.R;  // projector
  const Matrix ltl = inst.Lambda.transpose() * inst.Lambda;
  const Vector ly = inst.Lambda.transpose() * inst.y;

  Matrix c1 = Matrix::Zero(order, order);
  c1.topLeftCorner(n, n) = p;
  c1.block(n, n, n, n) = p;

  Matrix c2 = Matrix::Zero(order, order);
  c2.topLeftCorner(n, n) = ltl;
  c2.block(n, n, n, n) = ltl;
  c2.block(n, 2 * n, n, 1) = ly;
  c2.block(2 * n, n, 1, n) = ly.transpose();

  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  out.trace_residuals = {
      (c1 * out.X).trace() - e2,
      (c2 * out.X).trace() - (n2 - inst.y.squaredNorm()),
      out.X(2 * n, 2 * n) - 1.0,
  };

  const Matrix a = c * p + d * ltl;
  Matrix slack = Matrix::Zero(order, order);
  slack.topLeftCorner(n, n) = a - Matrix::Identity(n, n);
  slack.block(n, n, n, n) = a;
  slack.block(n, 2 * n, n, 1) = d * ly;
  slack.block(2 * n, n, 1, n) = d * ly.transpose();
  slack(2 * n, 2 * n) = t;
  out.slackness = (slack * out.X).trace();

  out.lub_prime = (inst.Q * h).squaredNorm();
  return out;
}

ExactnessReport exactness_report(const ProblemInstance& inst) {
  const ValidationReport report = validate(inst);
  const SdpSolution sdp = solve_lub(inst);

  ExactnessReport out;
  out.lub = sdp.lub;
  out.radius_sdp = std::sqrt(std::max(0.0, sdp.lub));
  if (!report.specific()) {
    out.fallback_reason = "instance is not specific";
    return out;
  }
  try {
    const ImpeqSolution sol = solve_impeq(inst);
    out.radius_impeq = sol.radius;
    const double t_hat = sol.d_sharp * (inst.Lambda * sol.f_sharp).dot(inst.y);
    const DualWitness witness = build_dual_witness(
        inst, sol.f_sharp, sol.h_sharp, sol.c_sharp, sol.d_sharp, t_hat);
    out.duality_gap = sdp.lub - witness.lub_prime;
    out.slackness = witness.slackness;
    out.agree = std::abs(out.radius_sdp - sol.radius) <=
                tols().route_agree_rel * (1.0 + sol.radius);
  } catch (const SolverError& err) {
    out.fallback_reason = err.what();
  }
  return out;
}

}  // namespace cheb
