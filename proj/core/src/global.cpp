#include "cheb/global.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cheb/parallel.hpp"
#include "cheb/regularize.hpp"
#include "barrier.hpp"

namespace cheb {
namespace {

// Extreme points of {x : x^T A x <= rho^2} for PSD A, split through the
// eigendecomposition into range directions (true ellipsoid boundary) and
// kernel directions (unbounded, explored up to `cap`).
struct EllipsoidGeom {
  Matrix basis;    // orthonormal eigenvector columns
  Vector values;   // matching eigenvalues, ascending
  double rho = 0.0;
  double cap = 0.0;
  double cutoff = 0.0;

  EllipsoidGeom(const Matrix& gram, double rho_in, double cap_in) {
    const Spectrum spec = eig_sym(SymMatrix(gram));
    const Eigen::Index n = gram.rows();
    basis.resize(n, n);
    values.resize(n);
    Eigen::Index col = 0;
    for (const EigenPair& g : spec.groups) {
      for (Eigen::Index j = 0; j < g.multiplicity(); ++j) {
        basis.col(col) = g.vectors.col(j);
        values(col) = g.value;
        ++col;
      }
    }
    rho = rho_in;
    cap = cap_in;
    cutoff = tols().kernel_min_eig * (1.0 + spec.norm2);
  }

  // argmax of g^T x over the capped set. Kernel components of g push to the
  // cap; range components solve the equality-constrained linear program on
  // the ellipsoid. Zero gradient maps to the origin (any feasible point ties).
  Vector support_point(const Vector& g) const {
    const Vector gc = basis.transpose() * g;
    Vector xc = Vector::Zero(gc.size());
    double range_weight = 0.0;  // sum g_i^2 / lambda_i over range directions
    double kernel_norm2 = 0.0;
    for (Eigen::Index i = 0; i < gc.size(); ++i) {
      if (values(i) > cutoff)
        range_weight += gc(i) * gc(i) / values(i);
      else
        kernel_norm2 += gc(i) * gc(i);
    }
    if (range_weight > 0.0) {
      const double scale = rho / std::sqrt(range_weight);
      for (Eigen::Index i = 0; i < gc.size(); ++i)
        if (values(i) > cutoff) xc(i) = scale * gc(i) / values(i);
    }
    if (kernel_norm2 > 0.0) {
      const double scale = cap / std::sqrt(kernel_norm2);
      for (Eigen::Index i = 0; i < gc.size(); ++i)
        if (values(i) <= cutoff) xc(i) = scale * gc(i);
    }
    return basis * xc;
  }

  // Random extreme point: support point of a Gaussian direction.
  Vector random_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector g(basis.rows());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
    return support_point(g);
  }
};

}  // namespace

GlobalMap solve_global(const ProblemInstance& inst) {
  validate(inst);
  if (!inst.s_is_identity())
    throw ValidationError(
        "solve_global requires S = Id (plain Euclidean error ball)");

  detail::BarrierSpec spec;
  spec.G0 = inst.Q.transpose() * inst.Q;
  spec.G1 = inst.gram_model();
  spec.G2 = inst.Lambda.transpose() * inst.Lambda;
  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  spec.value = [e2, n2](double c, double d) { return c * e2 + d * n2; };
  spec.gradient = [e2, n2](double, double) {
    return std::array<double, 2>{e2, n2};
  };
  // Linear objective: curvature comes from the barrier alone.
  spec.hessian = [](double, double) { return std::array<double, 3>{}; };

  detail::BarrierOutcome opt = detail::barrier_minimize(spec);
  detail::polish_axes(spec, opt.c, opt.d);

  GlobalMap out;
  out.c_sharp = opt.c;
  out.d_sharp = opt.d;
  out.sdp_value = opt.c * e2 + opt.d * n2;
  if (opt.c + opt.d <= 0.0)
    throw SolverError("solve_global: degenerate optimizer c = d = 0");
  out.tau_sharp = opt.d / (opt.c + opt.d);

  // Column j of the map is Q applied to the regularizer output for y = e_j.
  ProblemInstance unit = inst;
  out.map.resize(inst.Q.rows(), inst.m);
  for (Eigen::Index j = 0; j < inst.m; ++j) {
    unit.y = Vector::Unit(inst.m, j);
    const RegularizedSolution sol =
        solve_cd(unit, 1.0 - out.tau_sharp, out.tau_sharp);
    out.map.col(j) = inst.Q * sol.f;
  }
  return out;
}

double gwce_estimate(const ProblemInstance& inst, const Matrix& map,
                     std::int64_t samples, std::uint64_t seed) {
  validate(inst);
  if (map.rows() != inst.Q.rows() || map.cols() != inst.m)
    throw ValidationError("gwce_estimate: map shape does not match Q and Lambda");
  if (samples <= 0) return 0.0;

  const Tolerances& tol = tols();
  const double cap = 1e3 * (1.0 + inst.epsilon + inst.eta);
  const EllipsoidGeom model_geom(inst.gram_model(), inst.epsilon, cap);
  const EllipsoidGeom error_geom(Matrix(inst.S.transpose() * inst.S), inst.eta,
                                 cap);

  // Residual operator pieces: r(f, e) = (Q - B Lambda) f - B e.
  const Matrix a_f = inst.Q - map * inst.Lambda;
  const Matrix& a_e = map;

  auto ascend = [&](Vector f, Vector e) {
    Vector r = a_f * f - a_e * e;
    double best = r.squaredNorm();
    for (int it = 0; it < tol.ascent_max_iter; ++it) {
      const Vector gf = 2.0 * (a_f.transpose() * r);
      const Vector ge = -2.0 * (a_e.transpose() * r);
      const Vector sf = model_geom.support_point(gf);
      const Vector se = error_geom.support_point(ge);
      const double gain = gf.dot(sf - f) + ge.dot(se - e);
      if (gain <= 1e-12 * (1.0 + best)) break;
      // The objective is convex, so jumping to the support point cannot
      // decrease it; equal value means a flat face and we stop.
      const Vector rn = a_f * sf - a_e * se;
      const double cand = rn.squaredNorm();
      if (cand <= best * (1.0 + 1e-14)) break;
      f = sf;
      e = se;
      r = rn;
      best = cand;
    }
    return best;
  };

  const std::int64_t chunk_size = 1024;
  const std::int64_t chunks = (samples + chunk_size - 1) / chunk_size;
  std::vector<double> chunk_best(static_cast<std::size_t>(chunks), 0.0);
  parallel_chunks(chunks, [&](std::int64_t k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    const std::int64_t count =
        std::min(chunk_size, samples - k * chunk_size);
    double local = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      const Vector f = model_geom.random_point(rng);
      const Vector e = error_geom.random_point(rng);
      local = std::max(local, ascend(f, e));
    }
    chunk_best[static_cast<std::size_t>(k)] = local;
  });

  double best = 0.0;
  for (double v : chunk_best) best = std::max(best, v);
  return std::sqrt(best);
}

}  // namespace cheb
