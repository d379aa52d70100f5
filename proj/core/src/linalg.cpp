#include "cheb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cheb {

const Tolerances& tols() {
  static const Tolerances t{};
  return t;
}

SymMatrix::SymMatrix(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) {
    std::ostringstream os;
    os << "symmetric matrix expected, got shape " << a_.rows() << "x" << a_.cols();
    throw ValidationError(os.str());
  }
  if (!a_.allFinite()) throw ValidationError("symmetric matrix has non-finite entries");
  const double scale = 1.0 + a_.cwiseAbs().maxCoeff();
  const double skew = (a_ - a_.transpose()).cwiseAbs().maxCoeff();
  if (skew > tols().symmetry_rel * scale) {
    std::ostringstream os;
    os << "matrix is not symmetric: max |a_ij - a_ji| = " << skew;
    throw ValidationError(os.str());
  }
}

std::vector<double> Spectrum::values() const {
  std::vector<double> out;
  for (const auto& g : groups)
    for (Eigen::Index k = 0; k < g.multiplicity(); ++k) out.push_back(g.value);
  return out;
}

namespace {

// One cyclic Jacobi pass over all (p, q) pairs in row-major order.
// Returns the off-diagonal Frobenius norm after the pass.
double jacobi_sweep(Matrix& a, Matrix& v) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double app = a(p, p);
      const double aqq = a(q, q);
      // Stop rotating entries that are already negligible relative to the
      // diagonal; keeps the sweep strictly deterministic and convergent.
      if (std::abs(apq) <= 1e-300) {
        a(p, q) = a(q, p) = 0.0;
        continue;
      }
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0)
                           ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                           : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      // A <- J^T A J with J the rotation in the (p, q) plane.
      for (Eigen::Index k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      a(p, q) = a(q, p) = 0.0;  // exact by construction of the rotation
      for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
      }
    }
  }
  double off = 0.0;
  for (Eigen::Index p = 0; p + 1 < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
  return std::sqrt(2.0 * off);
}

}  // namespace

Spectrum eig_sym(const SymMatrix& input) {
  const Eigen::Index n = input.order();
  Matrix a = 0.5 * (input.mat() + input.mat().transpose());
  Matrix v = Matrix::Identity(n, n);

  const double fro = a.norm();
  if (fro > 0.0) {
    const double target = 1e-15 * fro;
    for (int sweep = 0; sweep < 50; ++sweep) {
      if (jacobi_sweep(a, v) <= target) break;
    }
  }

  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (a(i, i) != a(j, j)) return a(i, i) < a(j, j);
    return i < j;  // deterministic tie break
  });

  std::vector<double> vals(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) vals[static_cast<size_t>(k)] = a(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(k)]);
  const double norm2 = std::max(std::abs(vals.front()), std::abs(vals.back()));
  const double group_tol = tols().eig_group_rel * norm2;

  Spectrum spec;
  spec.norm2 = norm2;
  size_t start = 0;
  while (start < vals.size()) {
    size_t end = start + 1;
    // Chain gaps: neighbors within tolerance belong to one group.
    while (end < vals.size() && vals[end] - vals[end - 1] <= group_tol) ++end;
    EigenPair pair;
    pair.vectors.resize(n, static_cast<Eigen::Index>(end - start));
    double sum = 0.0;
    for (size_t k = start; k < end; ++k) {
      sum += vals[k];
      pair.vectors.col(static_cast<Eigen::Index>(k - start)) = v.col(idx[k]);
    }
    pair.value = sum / static_cast<double>(end - start);
    spec.groups.push_back(std::move(pair));
    start = end;
  }
  return spec;
}

namespace {

// Shared pseudo-inverse application with one round of iterative refinement.
// The refinement tightens the residual at negligible cost; it matters for
// ill-conditioned interior-point matrices.
Vector refined_pinv(const SymMatrix& a, const Spectrum& spec, double cutoff,
                    const Vector& b) {
  auto apply = [&](const Vector& rhs) {
    Vector x = Vector::Zero(a.order());
    for (const auto& g : spec.groups) {
      if (std::abs(g.value) <= cutoff) continue;
      x.noalias() += g.vectors * ((g.vectors.transpose() * rhs) / g.value);
    }
    return x;
  };
  Vector x = apply(b);
  x += apply(b - a.mat() * x);
  return x;
}

}  // namespace

SpdSolution solve_spd(const SymMatrix& a, const Vector& b, bool allow_degenerate) {
  if (b.size() != a.order()) throw ValidationError("solve_spd: shape mismatch");
  const Spectrum spec = eig_sym(a);
  const double norm = spec.norm2;
  if (spec.min_value() < -tols().psd_rel * (1.0 + norm))
    throw ValidationError("solve_spd: matrix is not positive semidefinite");

  const double cutoff = tols().spd_rank_rel * norm;
  const bool full_rank = spec.min_value() > cutoff;
  if (!full_rank && !allow_degenerate)
    throw SolverError("solve_spd: singular matrix and degenerate solve disabled");

  SpdSolution out;
  out.degenerate = !full_rank;
  out.x = refined_pinv(a, spec, cutoff, b);
  out.residual = (b - a.mat() * out.x).norm();

  if (out.degenerate) {
    const double limit = tols().inconsistent_rel * (1.0 + b.norm());
    if (out.residual > limit) {
      std::ostringstream os;
      os << "inconsistent system: right-hand side leaves range(A), residual " << out.residual;
      throw NumericalError(os.str());
    }
  }
  return out;
}

Vector pinv_apply(const SymMatrix& a, const Vector& b) {
  if (b.size() != a.order()) throw ValidationError("pinv_apply: shape mismatch");
  const Spectrum spec = eig_sym(a);
  return refined_pinv(a, spec, tols().spd_rank_rel * spec.norm2, b);
}

std::pair<double, EigenPair> min_eigenpair(const SymMatrix& a) {
  Spectrum spec = eig_sym(a);
  return {spec.groups.front().value, spec.groups.front()};
}

double min_eigenvalue(const SymMatrix& a) { return eig_sym(a).min_value(); }

bool is_psd(const SymMatrix& a) {
  const Spectrum spec = eig_sym(a);
  return spec.min_value() >= -tols().psd_rel * (1.0 + spec.norm2);
}

Matrix bordered_block(const Matrix& a, const Vector& b, double t) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw ValidationError("bordered_block: shape mismatch");
  const Eigen::Index n = a.rows();
  Matrix m(n + 1, n + 1);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, 1) = b;
  m.bottomLeftCorner(1, n) = b.transpose();
  m(n, n) = t;
  return m;
}

double schur_complement(const SymMatrix& a, const Vector& b, double t) {
  const SpdSolution s = solve_spd(a, b, true);
  return t - b.dot(s.x);
}

}  // namespace cheb
