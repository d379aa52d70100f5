#pragma once

#include <utility>
#include <vector>

#include "cheb/types.hpp"

namespace cheb {

// Symmetric matrix wrapper. Construction checks symmetry within
// tols().symmetry_rel and throws ValidationError otherwise; downstream code
// can then rely on the invariant instead of re-checking.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix a);
  const Matrix& mat() const { return a_; }
  Eigen::Index order() const { return a_.rows(); }

 private:
  Matrix a_;
};

// One eigenvalue group: eigenvalues that agree within the grouping tolerance
// are merged, `value` is their mean and `vectors` spans the joint eigenspace
// (orthonormal columns).
struct EigenPair {
  double value = 0.0;
  Matrix vectors;  // n x multiplicity
  Eigen::Index multiplicity() const { return vectors.cols(); }
};

struct Spectrum {
  std::vector<EigenPair> groups;  // ascending by value
  double norm2 = 0.0;             // max |eigenvalue|

  double min_value() const { return groups.front().value; }
  double max_value() const { return groups.back().value; }
  // All eigenvalues repeated with multiplicity, ascending.
  std::vector<double> values() const;
};

// Eigendecomposition by cyclic Jacobi rotations. Deterministic sweep order,
// suitable for the small dense matrices this library works with (order up to
// a few dozen). Accuracy: eigenvector residuals and reconstruction error stay
// well inside tols().eig_residual_rel / eig_reconstruct_rel.
Spectrum eig_sym(const SymMatrix& a);

struct SpdSolution {
  Vector x;
  bool degenerate = false;  // pseudo-inverse branch was taken
  double residual = 0.0;    // ||A x - b||
};

// Solve A x = b for symmetric positive semidefinite A. Full-rank inputs take
// the exact branch; rank-deficient inputs return the minimal-norm solution
// when `allow_degenerate` is set and throw otherwise. A right-hand side that
// leaves range(A) beyond tolerance raises NumericalError ("inconsistent
// system") carrying the residual.
SpdSolution solve_spd(const SymMatrix& a, const Vector& b, bool allow_degenerate = true);

// Pseudo-inverse action A^+ b for PSD A, keeping only eigendirections above
// the numerical rank cutoff. Unlike solve_spd this never rejects a right-hand
// side with a component outside range(A); variational callers (interior-point
// evaluations near a boundary-singular pencil) want the projected solution,
// not an exception.
Vector pinv_apply(const SymMatrix& a, const Vector& b);

// Smallest eigenvalue together with its (possibly multi-dimensional)
// eigenspace group.
std::pair<double, EigenPair> min_eigenpair(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);

// lambda_min(A) >= -tols().psd_rel * (1 + ||A||).
bool is_psd(const SymMatrix& a);

// [[A, b], [b^T, t]] as a dense symmetric matrix.
Matrix bordered_block(const Matrix& a, const Vector& b, double t);

// t - b^T A^+ b, the Schur complement of the bordered block with respect to
// A. For positive definite A the bordered block is PSD iff this value is
// nonnegative; tests exercise the equivalence both ways.
double schur_complement(const SymMatrix& a, const Vector& b, double t);

}  // namespace cheb
