#include "cheb/model.hpp"

#include <cmath>
#include <sstream>

namespace cheb {

namespace {

bool is_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
         tols().identity_abs;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

bool ProblemInstance::s_is_identity() const { return is_identity(S); }
bool ProblemInstance::q_is_identity() const { return is_identity(Q); }

Matrix ProblemInstance::gram_model() const { return R.transpose() * R; }

Matrix ProblemInstance::gram_data() const {
  const Matrix sl = S * Lambda;
  return sl.transpose() * sl;
}

Vector ProblemInstance::data_pullback() const {
  return Lambda.transpose() * (S.transpose() * (S * y));
}

ValidationReport validate(const ProblemInstance& inst) {
  require(inst.n >= 1, "dimension must be at least 1");
  require(inst.m >= 1, "observation count must be at least 1");
  require(inst.R.cols() == inst.n, "R must have n columns");
  require(inst.R.rows() >= 1, "R must have at least one row");
  require(inst.Lambda.rows() == inst.m && inst.Lambda.cols() == inst.n,
          "Lambda must be m x n");
  require(inst.S.cols() == inst.m && inst.S.rows() >= 1, "S must have m columns");
  require(inst.Q.cols() == inst.n && inst.Q.rows() >= 1, "Q must have n columns");
  require(inst.y.size() == inst.m, "y must have length m");
  require(inst.R.allFinite() && inst.Lambda.allFinite() && inst.S.allFinite() &&
              inst.Q.allFinite() && inst.y.allFinite(),
          "matrices and data must be finite");
  require(std::isfinite(inst.epsilon) && inst.epsilon > 0.0, "epsilon must be positive");
  require(std::isfinite(inst.eta) && inst.eta > 0.0, "eta must be positive");

  ValidationReport report;

  // Joint kernel: the two constraint operators may not share a null
  // direction, otherwise the feasible set is unbounded and no center exists.
  const Matrix stack = inst.gram_model() + inst.gram_data();
  const double kernel_eig = min_eigenvalue(SymMatrix(stack));
  report.checks.push_back({"joint_kernel_min_eig", kernel_eig,
                           kernel_eig > tols().kernel_min_eig});
  if (kernel_eig <= tols().kernel_min_eig) {
    std::ostringstream os;
    os << "ker(R) and ker(S Lambda) intersect: lambda_min(R^T R + (S Lambda)^T (S Lambda)) = "
       << kernel_eig;
    throw ValidationError(os.str());
  }

  const double q_top = eig_sym(SymMatrix(inst.Q.transpose() * inst.Q)).max_value();
  report.checks.push_back({"quantity_map_nonzero", q_top, q_top > tols().kernel_min_eig});
  if (q_top <= tols().kernel_min_eig)
    throw ValidationError("quantity-of-interest map Q is zero");

  // Specific-case assumptions, each reported with its measured residual.
  bool specific = true;
  auto record = [&](const std::string& name, double residual, double tol) {
    const bool ok = residual <= tol;
    report.checks.push_back({name, residual, ok});
    specific = specific && ok;
    return ok;
  };

  if (inst.R.rows() == inst.n && inst.R.cols() == inst.n) {
    const double sym = (inst.R - inst.R.transpose()).cwiseAbs().maxCoeff();
    record("projector_symmetric", sym, tols().projector_abs);
    const double idem = (inst.R * inst.R - inst.R).cwiseAbs().maxCoeff();
    record("projector_idempotent", idem, tols().projector_abs);
  } else {
    record("projector_square", 1.0, 0.0);
  }
  const double rows = (inst.Lambda * inst.Lambda.transpose() -
                       Matrix::Identity(inst.m, inst.m))
                          .cwiseAbs()
                          .maxCoeff();
  record("observation_rows_orthonormal", rows, tols().row_orthonormal_abs);
  record("error_shape_identity",
         inst.s_is_identity() ? 0.0 : 1.0, 0.5);
  record("quantity_identity",
         inst.q_is_identity() ? 0.0 : 1.0, 0.5);

  report.cls = specific ? InstanceClass::specific : InstanceClass::general;

  if (inst.class_hint) {
    if (*inst.class_hint != "specific" && *inst.class_hint != "general")
      throw ValidationError("class_hint must be \"specific\" or \"general\"");
    if (*inst.class_hint == "specific" && !specific) {
      std::ostringstream os;
      os << "instance hinted specific but assumptions fail:";
      for (const auto& c : report.checks)
        if (!c.passed) os << " " << c.name << " (residual " << c.residual << ")";
      throw ValidationError(os.str());
    }
  }
  return report;
}

Matrix projector_from_subspace(const std::vector<Vector>& basis) {
  if (basis.empty()) throw ValidationError("projector_from_subspace: empty basis");
  const Eigen::Index n = basis.front().size();
  Matrix v(n, static_cast<Eigen::Index>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].size() != n)
      throw ValidationError("projector_from_subspace: inconsistent vector lengths");
    v.col(static_cast<Eigen::Index>(k)) = basis[k];
  }
  const Matrix gram = v.transpose() * v;
  const Spectrum spec = eig_sym(SymMatrix(gram));
  if (spec.min_value() <= tols().dependent_basis_rel * (1.0 + spec.norm2))
    throw ValidationError("projector_from_subspace: basis is linearly dependent");
  // P = Id - V (V^T V)^{-1} V^T, assembled column by column.
  Matrix inv_vt(v.cols(), n);
  for (Eigen::Index j = 0; j < n; ++j)
    inv_vt.col(j) = solve_spd(SymMatrix(gram), v.transpose().col(j), false).x;
  return Matrix::Identity(n, n) - v * inv_vt;
}

Membership membership(const ProblemInstance& inst, const Vector& f) {
  if (f.size() != inst.n) throw ValidationError("membership: vector has wrong length");
  Membership out;
  out.slack_model = inst.epsilon * inst.epsilon - (inst.R * f).squaredNorm();
  out.slack_data =
      inst.eta * inst.eta - (inst.S * (inst.y - inst.Lambda * f)).squaredNorm();
  out.in_model_set = out.slack_model >= 0.0;
  out.in_data_set = out.slack_data >= 0.0;
  return out;
}

}  // namespace cheb
