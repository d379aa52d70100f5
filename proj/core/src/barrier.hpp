#pragma once

// Internal: damped-Newton log-det barrier minimizer for two-variable
// semidefinite programs of the form
//   min F(c, d)  s.t.  M(c, d) = c G1 + d G2 - G0 >= 0,  c, d >= 0.
// Shared by the center relaxation, the pointwise upper bound, and the global
// map program. Not installed.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cheb/linalg.hpp"
#include "cheb/sdp.hpp"
#include "cheb/types.hpp"

namespace cheb::detail {

struct BarrierSpec {
  Matrix G0, G1, G2;
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> gradient;
  // Objective Hessian (h_cc, h_cd, h_dd), excluding barrier terms. When set,
  // Newton uses it together with the exact log-det Hessian; finite
  // differencing of the gradient is only a fallback. Near the boundary the
  // gradient varies like an inverse square root of the distance, so a
  // difference quotient there is mostly noise and the iteration stalls
  // several orders of magnitude short of the achievable accuracy.
  std::function<std::array<double, 3>(double, double)> hessian;
};

struct BarrierOutcome {
  double c = 0.0;
  double d = 0.0;
  std::vector<BarrierIterate> trace;
};

inline double lmi_min_eig(const BarrierSpec& spec, double c, double d) {
  const Matrix m = c * spec.G1 + d * spec.G2 - spec.G0;
  return min_eigenvalue(SymMatrix(m));
}

inline bool strictly_feasible(const BarrierSpec& spec, double c, double d) {
  return c > 0.0 && d > 0.0 && lmi_min_eig(spec, c, d) > 0.0;
}

// Scale factor for the canonical interior start s * (1, 1).
inline double interior_scale(const BarrierSpec& spec) {
  const double top = eig_sym(SymMatrix(spec.G0)).max_value();
  const double bottom = min_eigenvalue(SymMatrix(spec.G1 + spec.G2));
  if (bottom <= 0.0) throw SolverError("barrier: LMI pencil has empty interior");
  return 2.0 * std::max(1.0, top / bottom);
}

inline BarrierOutcome barrier_minimize(const BarrierSpec& spec) {
  const Tolerances& tol = tols();
  const double inf = std::numeric_limits<double>::infinity();

  auto phi = [&](double c, double d, double mu) {
    if (!(c > 0.0 && d > 0.0)) return inf;
    const Matrix m = c * spec.G1 + d * spec.G2 - spec.G0;
    const Spectrum s = eig_sym(SymMatrix(m));
    double logdet = 0.0;
    for (const auto& g : s.groups) {
      if (g.value <= 0.0) return inf;
      logdet += std::log(g.value) * static_cast<double>(g.multiplicity());
    }
    return spec.value(c, d) - mu * (logdet + std::log(c) + std::log(d));
  };

  auto grad_phi = [&](double c, double d, double mu) -> std::array<double, 2> {
    const Matrix m = c * spec.G1 + d * spec.G2 - spec.G0;
    const Spectrum s = eig_sym(SymMatrix(m));
    // tr(M^{-1} Gk) through the eigendecomposition.
    double tr1 = 0.0, tr2 = 0.0;
    for (const auto& g : s.groups) {
      const Matrix p1 = g.vectors.transpose() * spec.G1 * g.vectors;
      const Matrix p2 = g.vectors.transpose() * spec.G2 * g.vectors;
      tr1 += p1.trace() / g.value;
      tr2 += p2.trace() / g.value;
    }
    const std::array<double, 2> g0 = spec.gradient(c, d);
    return {g0[0] - mu * (tr1 + 1.0 / c), g0[1] - mu * (tr2 + 1.0 / d)};
  };

  double s0 = interior_scale(spec);
  double c = s0, d = s0;
  for (int k = 0; k < 60 && !strictly_feasible(spec, c, d); ++k) {
    c *= 2.0;
    d *= 2.0;
  }
  if (!strictly_feasible(spec, c, d))
    throw SolverError("barrier: failed to find a strictly feasible start");

  // Exact Hessian of the -mu log det(M) + -mu log(c) - mu log(d) part,
  // through the eigendecomposition of M: the (i, j) entry is
  // mu tr(M^{-1} Gi M^{-1} Gj) plus the diagonal weight terms.
  auto barrier_hessian = [&](double c, double d,
                             double mu) -> std::array<double, 3> {
    const Matrix m = c * spec.G1 + d * spec.G2 - spec.G0;
    const Spectrum s = eig_sym(SymMatrix(m));
    const Eigen::Index n = m.rows();
    Matrix v(n, n);
    Vector lam(n);
    Eigen::Index col = 0;
    for (const auto& g : s.groups)
      for (Eigen::Index k = 0; k < g.multiplicity(); ++k, ++col) {
        v.col(col) = g.vectors.col(k);
        lam(col) = std::max(g.value, 1e-300);
      }
    const Vector inv_sqrt = lam.cwiseSqrt().cwiseInverse();
    const Matrix w1 =
        inv_sqrt.asDiagonal() * (v.transpose() * spec.G1 * v) * inv_sqrt.asDiagonal();
    const Matrix w2 =
        inv_sqrt.asDiagonal() * (v.transpose() * spec.G2 * v) * inv_sqrt.asDiagonal();
    return {mu * (w1.squaredNorm() + 1.0 / (c * c)),
            mu * w1.cwiseProduct(w2).sum(),
            mu * (w2.squaredNorm() + 1.0 / (d * d))};
  };

  BarrierOutcome out;
  double mu = tol.barrier_mu_init;
  while (true) {
    for (int iter = 0; iter < tol.newton_max_iter; ++iter) {
      const std::array<double, 2> g = grad_phi(c, d, mu);

      double h11, h12, h22;
      if (spec.hessian) {
        const std::array<double, 3> ho = spec.hessian(c, d);
        const std::array<double, 3> hb = barrier_hessian(c, d, mu);
        h11 = ho[0] + hb[0];
        h12 = ho[1] + hb[1];
        h22 = ho[2] + hb[2];
      } else {
        // Central-difference Hessian with steps shrunk until the probe
        // points stay strictly feasible (the barrier is stiff near the
        // boundary).
        double hc = std::min(1e-6 * (1.0 + c), 0.25 * c);
        while (hc > 1e-14 && !(strictly_feasible(spec, c + hc, d) &&
                               strictly_feasible(spec, c - hc, d)))
          hc *= 0.5;
        double hd = std::min(1e-6 * (1.0 + d), 0.25 * d);
        while (hd > 1e-14 && !(strictly_feasible(spec, c, d + hd) &&
                               strictly_feasible(spec, c, d - hd)))
          hd *= 0.5;

        const std::array<double, 2> gcp = grad_phi(c + hc, d, mu);
        const std::array<double, 2> gcm = grad_phi(c - hc, d, mu);
        const std::array<double, 2> gdp = grad_phi(c, d + hd, mu);
        const std::array<double, 2> gdm = grad_phi(c, d - hd, mu);
        h11 = (gcp[0] - gcm[0]) / (2.0 * hc);
        h12 = 0.5 * ((gcp[1] - gcm[1]) / (2.0 * hc) + (gdp[0] - gdm[0]) / (2.0 * hd));
        h22 = (gdp[1] - gdm[1]) / (2.0 * hd);
      }

      // Regularize to SPD when the assembled Hessian is not (finite
      // differencing gone sour, or an exactly singular objective block).
      const double tr = h11 + h22;
      const double det = h11 * h22 - h12 * h12;
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      const double lmin = tr / 2.0 - disc;
      if (!(lmin > 0.0)) {
        const double shift = -lmin + 1e-12 + 1e-8 * std::abs(tr);
        h11 += shift;
        h22 += shift;
      }

      const double den = h11 * h22 - h12 * h12;
      double pc, pd;
      if (std::abs(den) > 1e-300) {
        pc = -(h22 * g[0] - h12 * g[1]) / den;
        pd = -(h11 * g[1] - h12 * g[0]) / den;
      } else {
        pc = -g[0];
        pd = -g[1];
      }
      const double descent = g[0] * pc + g[1] * pd;
      if (!(descent < 0.0)) {
        pc = -g[0];
        pd = -g[1];
      }
      const double decrement = std::sqrt(std::max(0.0, -(g[0] * pc + g[1] * pd)));
      if (decrement <= tol.newton_decrement_tol) break;

      const double base = phi(c, d, mu);
      const double slope = g[0] * pc + g[1] * pd;
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const double cn = c + step * pc;
        const double dn = d + step * pd;
        if (strictly_feasible(spec, cn, dn) &&
            phi(cn, dn, mu) <= base + 0.25 * step * slope) {
          c = cn;
          d = dn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    out.trace.push_back({mu, c, d, spec.value(c, d)});
    if (mu <= tol.barrier_mu_min) break;
    mu = std::max(tol.barrier_mu_min, mu / tol.barrier_mu_factor);
  }

  out.c = c;
  out.d = d;
  return out;
}

// Send a weight that converged onto an axis to exactly zero when the LMI
// stays satisfied there.
inline void polish_axes(const BarrierSpec& spec, double& c, double& d) {
  const Tolerances& tol = tols();
  auto feasible_at = [&](double cc, double dd) {
    const Matrix m = cc * spec.G1 + dd * spec.G2 - spec.G0;
    const Spectrum s = eig_sym(SymMatrix(m));
    return s.min_value() >= -tol.psd_rel * (1.0 + s.norm2);
  };
  if (c <= tol.axis_polish_abs && feasible_at(0.0, d)) c = 0.0;
  if (d <= tol.axis_polish_abs && feasible_at(c, 0.0)) d = 0.0;
}

}  // namespace cheb::detail
