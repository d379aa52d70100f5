#include "cheb/presets.hpp"

#include <random>
#include <vector>

namespace cheb {
namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                       Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = gauss(rng);
  return a;
}

Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

double kernel_margin(const ProblemInstance& inst) {
  const Matrix joint = inst.gram_model() + inst.gram_data();
  return min_eigenvalue(SymMatrix(joint));
}

Vector consistent_data(std::mt19937_64& rng, const ProblemInstance& inst) {
  // Build the measurements from a strictly feasible pair (f0, e).  Both
  // constraint slacks then stay bounded away from zero, so every generated
  // instance has a feasible set with nonempty interior.  The rescaling
  // factor is capped: a draw nearly inside a constraint kernel must not be
  // inflated into a huge data vector (the slack only gets wider that way).
  std::uniform_real_distribution<double> fill(0.0, 0.9);
  Vector f0 = gaussian_vector(rng, inst.n);
  const double model_norm = (inst.R * f0).norm();
  if (model_norm > 0.0)
    f0 *= std::min(10.0, fill(rng) * inst.epsilon / model_norm);
  Vector e = gaussian_vector(rng, inst.m);
  const double error_norm = (inst.S * e).norm();
  if (error_norm > 0.0)
    e *= std::min(10.0, fill(rng) * inst.eta / error_norm);
  return inst.Lambda * f0 + e;
}

void check_shapes(Eigen::Index dim, Eigen::Index m) {
  if (dim < 2) throw ValidationError("preset: dim must be at least 2");
  if (m < 1 || m > dim)
    throw ValidationError("preset: m must satisfy 1 <= m <= dim");
}

}  // namespace

ProblemInstance rectangle_instance(Eigen::Index dim, Eigen::Index m,
                                   double epsilon, double eta,
                                   const Vector& y) {
  check_shapes(dim, m);
  if (m == dim)
    throw ValidationError("rectangle_instance: m must be < dim so the model constraint is nontrivial");
  if (y.size() != m) throw ValidationError("rectangle_instance: y must have length m");

  ProblemInstance inst;
  inst.n = dim;
  inst.m = m;
  inst.R = Matrix::Zero(dim, dim);
  inst.R.bottomRightCorner(dim - m, dim - m) =
      Matrix::Identity(dim - m, dim - m);
  inst.Lambda = Matrix::Zero(m, dim);
  inst.Lambda.leftCols(m) = Matrix::Identity(m, m);
  inst.S = Matrix::Identity(m, m);
  inst.Q = Matrix::Identity(dim, dim);
  inst.epsilon = epsilon;
  inst.eta = eta;
  inst.y = y;
  inst.class_hint = "specific";
  return inst;
}

ProblemInstance ball_in_slab_instance(Eigen::Index dim, double epsilon,
                                      double eta, const Vector& y) {
  if (dim < 2) throw ValidationError("ball_in_slab_instance: dim must be at least 2");
  if (y.size() != dim) throw ValidationError("ball_in_slab_instance: y must have length dim");

  ProblemInstance inst;
  inst.n = dim;
  inst.m = dim;
  inst.R = Matrix::Zero(dim, dim);
  inst.R(0, 0) = 1.0;
  inst.Lambda = Matrix::Identity(dim, dim);
  inst.S = Matrix::Identity(dim, dim);
  inst.Q = Matrix::Identity(dim, dim);
  inst.epsilon = epsilon;
  inst.eta = eta;
  inst.y = y;
  inst.class_hint = "specific";
  return inst;
}

ProblemInstance rec1() {
  Vector y(1);
  y << 0.0;
  return rectangle_instance(2, 1, 1.0, 1.0, y);
}

ProblemInstance rec2() {
  Vector y(1);
  y << 0.3;
  return rectangle_instance(2, 1, 2.0, 1.0, y);
}

ProblemInstance ball1() {
  Vector y(2);
  y << 0.5, 0.0;
  return ball_in_slab_instance(2, 2.0, 1.0, y);
}

ProblemInstance random_specific(Eigen::Index dim, Eigen::Index m,
                                std::uint64_t seed) {
  check_shapes(dim, m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> budget(0.5, 2.0);
  std::uniform_int_distribution<Eigen::Index> subspace_dim(1, m);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    ProblemInstance inst;
    inst.n = dim;
    inst.m = m;

    const Eigen::Index k = subspace_dim(rng);
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j)
      basis.push_back(gaussian_vector(rng, dim));

    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, dim, m));
    const Matrix thin_q = qr.householderQ() * Matrix::Identity(dim, m);

    inst.Lambda = thin_q.transpose();
    inst.S = Matrix::Identity(m, m);
    inst.Q = Matrix::Identity(dim, dim);
    inst.epsilon = budget(rng);
    inst.eta = budget(rng);
    inst.class_hint = "specific";

    try {
      inst.R = projector_from_subspace(basis);
    } catch (const Error&) {
      continue;  // dependent draw, resample
    }
    inst.y = consistent_data(rng, inst);
    if (kernel_margin(inst) <= 0.05) continue;  // keep the joint kernel margin O(1) so downstream residuals stay at machine scale
    try {
      validate(inst);
    } catch (const Error&) {
      continue;
    }
    return inst;
  }
  throw SolverError("random_specific: rejection sampling failed to produce a valid instance");
}

ProblemInstance random_general(Eigen::Index dim, Eigen::Index m,
                               std::uint64_t seed) {
  check_shapes(dim, m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> budget(0.5, 2.0);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    ProblemInstance inst;
    inst.n = dim;
    inst.m = m;
    inst.R = gaussian_matrix(rng, dim, dim);
    inst.Lambda = gaussian_matrix(rng, m, dim);
    inst.S = gaussian_matrix(rng, m, m);
    inst.Q = gaussian_matrix(rng, dim, dim);
    inst.epsilon = budget(rng);
    inst.eta = budget(rng);
    inst.class_hint = "general";
    inst.y = consistent_data(rng, inst);

    if (kernel_margin(inst) <= 0.05) continue;  // keep the joint kernel margin O(1) so downstream residuals stay at machine scale
    try {
      validate(inst);
    } catch (const Error&) {
      continue;
    }
    return inst;
  }
  throw SolverError("random_general: rejection sampling failed to produce a valid instance");
}

}  // namespace cheb
