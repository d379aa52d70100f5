#include "cheb/impeq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace cheb {

namespace {

struct RatioParts {
  double num = 0.0;
  double den = 0.0;
};

RatioParts ratio_parts(const ProblemInstance& inst, double delta, double tau) {
  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  RatioParts p;
  p.num = (1.0 - tau) * (1.0 - tau) * e2 - tau * tau * n2;
  p.den = (1.0 - tau) * e2 - tau * n2 +
          (1.0 - tau) * tau * (1.0 - 2.0 * tau) * delta * delta;
  return p;
}

double lambda_min_at(const ProblemInstance& inst, double tau) {
  const Matrix w = (1.0 - tau) * inst.R + tau * (inst.Lambda.transpose() * inst.Lambda);
  return min_eigenvalue(SymMatrix(w));
}

// Cleared-form residual lambda_min * den - num. Continuous in tau, shares
// its roots with the ratio form away from poles, and turns the removable
// epsilon == eta point into an honest zero crossing.
double cleared_residual(const ProblemInstance& inst, double delta, double tau) {
  const RatioParts p = ratio_parts(inst, delta, tau);
  return lambda_min_at(inst, tau) * p.den - p.num;
}

}  // namespace

double impeq_residual(const ProblemInstance& inst, double delta, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw ValidationError("impeq_residual: tau outside [0, 1]");
  const RatioParts p = ratio_parts(inst, delta, tau);
  const double lmin = lambda_min_at(inst, tau);
  if (std::abs(p.den) > tols().impeq_pole_abs) return lmin - p.num / p.den;
  const double scale =
      inst.epsilon * inst.epsilon + inst.eta * inst.eta + delta * delta;
  if (std::abs(p.num) <= tols().impeq_pole_abs * (1.0 + scale))
    return lmin * p.den - p.num;  // removable point, cleared form
  std::ostringstream os;
  os << "pole in eigenvalue identity at tau = " << tau << " (denominator " << p.den
     << ")";
  throw SolverError(os.str());
}

namespace {

// Build the certificate candidate h inside the bottom eigenspace, scaled so
// the two norm equalities of condition (d) hold when they can.
Vector select_h(const ProblemInstance& inst, double tau, double lambda,
                const EigenPair& bottom, const Vector& f) {
  const Matrix& p = inst.R;
  const Matrix v = bottom.vectors;  // n x k, orthonormal
  const Eigen::Index k = v.cols();
  const double a_target =
      std::max(0.0, inst.epsilon * inst.epsilon - (p * f).squaredNorm());
  const double b_target =
      std::max(0.0, inst.eta * inst.eta - (inst.Lambda * f - inst.y).squaredNorm());

  auto oriented = [](Vector h) {
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      if (std::abs(h(i)) > 1e-14) {
        if (h(i) < 0.0) h = -h;
        break;
      }
    }
    return h;
  };

  if (k == 1) {
    const Vector pv = p * v.col(0);
    const Vector lv = inst.Lambda * v.col(0);
    const double pv2 = pv.squaredNorm();
    const double lv2 = lv.squaredNorm();
    // Scale against the model equality; the data equality is the consistency
    // check the certificate reports. Fall back to the data equality when the
    // eigenvector is invisible to P.
    double alpha2 = 0.0;
    if (pv2 > 1e-14) {
      alpha2 = a_target / pv2;
    } else if (lv2 > 1e-14) {
      alpha2 = b_target / lv2;
    }
    return oriented(std::sqrt(std::max(0.0, alpha2)) * v.col(0));
  }

  // Multi-dimensional eigenspace. With G_p = V^T P V and
  // G_l = V^T Lambda^T Lambda V the eigenspace identity gives
  // (1-tau) G_p + tau G_l = lambda I, so the required norm of the
  // coefficient vector is pinned:
  //   ||alpha||^2 = ((1-tau) a_target + tau b_target) / lambda,
  // and the model equality picks the mixing angle between the extreme
  // eigenvectors of G_p.
  const Matrix pv = p * v;
  const Matrix gp = v.transpose() * (p.transpose() * pv);
  const double rho2 = ((1.0 - tau) * a_target + tau * b_target) / lambda;
  if (rho2 <= 0.0) return Vector::Zero(inst.n);

  const Spectrum gspec = eig_sym(SymMatrix(gp));
  const double g_lo = gspec.min_value();
  const double g_hi = gspec.max_value();
  Vector u_lo = gspec.groups.front().vectors.col(0);
  Vector u_hi = gspec.groups.back().vectors.col(0);
  const double t = a_target / rho2;

  double mix = 0.0;  // weight on the high eigenvector
  if (g_hi - g_lo > 1e-14) mix = std::clamp((t - g_lo) / (g_hi - g_lo), 0.0, 1.0);
  const Vector alpha =
      std::sqrt(rho2) * (std::sqrt(1.0 - mix) * u_lo + std::sqrt(mix) * u_hi);
  return oriented(v * alpha);
}

struct Candidate {
  double tau = 0.0;
  double residual = 0.0;
};

}  // namespace

CertificateABCD certify_abcd(const ProblemInstance& inst, double tau, const Vector& f,
                             const Vector& h) {
  if (!(tau > 0.0 && tau < 1.0))
    throw ValidationError("certify_abcd: tau outside (0, 1)");
  const Matrix& p = inst.R;
  const Matrix ltl = inst.Lambda.transpose() * inst.Lambda;
  const Matrix w = (1.0 - tau) * p + tau * ltl;
  const double lambda = min_eigenvalue(SymMatrix(w));
  const double c = (1.0 - tau) / lambda;
  const double d = tau / lambda;

  CertificateABCD cert;
  const Matrix scaled = c * p + d * ltl;
  cert.a_min_eig =
      min_eigenvalue(SymMatrix(scaled - Matrix::Identity(inst.n, inst.n)));

  const Vector pf = p * f;
  const Vector misfit_pullback = inst.Lambda.transpose() * (inst.Lambda * f - inst.y);
  cert.res_b = (c * pf + d * misfit_pullback + scaled * h - h).norm();
  cert.res_c = {pf.dot(h), misfit_pullback.dot(h)};
  cert.res_d = {(p * (f + h)).squaredNorm() - inst.epsilon * inst.epsilon,
                (inst.Lambda * (f + h) - inst.y).squaredNorm() - inst.eta * inst.eta};

  cert.tolerance = tols().certificate_rel *
                   (1.0 + inst.epsilon * inst.epsilon + inst.eta * inst.eta);
  const double worst =
      std::max({std::max(0.0, -cert.a_min_eig), cert.res_b, std::abs(cert.res_c[0]),
                std::abs(cert.res_c[1]), std::abs(cert.res_d[0]),
                std::abs(cert.res_d[1])});
  cert.passed = worst <= cert.tolerance;
  return cert;
}

ImpeqSolution solve_impeq(const ProblemInstance& inst) {
  const ValidationReport report = validate(inst);
  if (!report.specific())
    throw ValidationError("solve_impeq: requires a specific instance");

  const double delta = compute_delta(inst).delta;
  const double lo = std::min(0.5, inst.epsilon / (inst.epsilon + inst.eta));
  const double hi = std::max(0.5, inst.epsilon / (inst.epsilon + inst.eta));
  const double e2 = inst.epsilon * inst.epsilon;
  const double n2 = inst.eta * inst.eta;
  const double res_scale = (1.0 + e2 + n2) * (1.0 + e2 + n2);

  auto res = [&](double tau) { return cleared_residual(inst, delta, tau); };

  std::vector<Candidate> candidates;
  auto push_candidate = [&](double tau) {
    for (const auto& c : candidates)
      if (std::abs(c.tau - tau) <= 1e-12) return;
    candidates.push_back({tau, res(tau)});
  };

  if (hi - lo <= 1e-15) {
    push_candidate(lo);
  } else {
    const int npts = tols().bracket_scan_points;
    std::vector<double> grid(npts), val(npts);
    for (int i = 0; i < npts; ++i) {
      grid[i] = lo + (hi - lo) * static_cast<double>(i) / (npts - 1);
      val[i] = res(grid[i]);
    }
    const double fd_step = 1e-6 * (hi - lo);
    auto refine = [&](double a, double b) {
      // Safeguarded Newton with central finite-difference slope, falling
      // back to bisection whenever Newton leaves the bracket.  The bracket
      // is driven all the way to machine width: downstream quantities
      // (the bottom eigenvector scaling in particular) amplify an error in
      // tau by roughly the slope of the squared solution norm, so stopping
      // at a small residual value is not good enough on shallow crossings.
      double fa = res(a), fb = res(b);
      if (fa == 0.0) return a;
      if (fb == 0.0) return b;
      double x = 0.5 * (a + b);
      for (int it = 0; it < 120; ++it) {
        const double fx = res(x);
        if (fx == 0.0 || b - a <= 1e-15) break;
        if ((fa < 0.0) != (fx < 0.0)) {
          b = x;
          fb = fx;
        } else {
          a = x;
          fa = fx;
        }
        const double slope = (res(std::min(x + fd_step, hi)) -
                              res(std::max(x - fd_step, lo))) /
                             (std::min(x + fd_step, hi) - std::max(x - fd_step, lo));
        double next = (slope != 0.0) ? x - fx / slope : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        x = next;
      }
      return x;
    };

    // Tangential near-zeros have no sign change to bracket, so sharpen them
    // by golden-section minimisation of the squared residual instead.
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    auto polish_flat = [&](double tau, double span) {
      double a = std::max(lo, tau - span), b = std::min(hi, tau + span);
      double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
      double f1 = res(x1) * res(x1), f2 = res(x2) * res(x2);
      for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - golden * (b - a);
          f1 = res(x1) * res(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + golden * (b - a);
          f2 = res(x2) * res(x2);
        }
      }
      const double mid = 0.5 * (a + b);
      const double fm = res(mid);
      return (fm * fm <= std::min(f1, f2)) ? mid : (f1 <= f2 ? x1 : x2);
    };

    const double near_zero = 1e-9 * res_scale;
    const double spacing = (hi - lo) / (npts - 1);
    for (int i = 0; i + 1 < npts; ++i) {
      if (val[i] == 0.0 || std::abs(val[i]) <= near_zero) {
        push_candidate(grid[i]);
        if (val[i] != 0.0) push_candidate(polish_flat(grid[i], spacing));
      }
      if ((val[i] < 0.0) != (val[i + 1] < 0.0))
        push_candidate(refine(grid[i], grid[i + 1]));
    }
    if (std::abs(val[npts - 1]) <= near_zero) {
      push_candidate(grid[npts - 1]);
      if (val[npts - 1] != 0.0)
        push_candidate(polish_flat(grid[npts - 1], spacing));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.tau < b.tau; });

  std::ostringstream diag;
  for (const auto& cand : candidates) {
    const double tau = std::clamp(cand.tau, 1e-12, 1.0 - 1e-12);
    const Matrix w =
        (1.0 - tau) * inst.R + tau * (inst.Lambda.transpose() * inst.Lambda);
    const auto [lambda, bottom] = min_eigenpair(SymMatrix(w));
    if (lambda <= 0.0) continue;
    const Vector f = solve_tau(inst, tau).f;
    const Vector h = select_h(inst, tau, lambda, bottom, f);
    const CertificateABCD cert = certify_abcd(inst, tau, f, h);
    if (cert.passed) {
      ImpeqSolution out;
      out.tau_sharp = tau;
      out.lambda_min = lambda;
      out.c_sharp = (1.0 - tau) / lambda;
      out.d_sharp = tau / lambda;
      out.f_sharp = f;
      out.h_sharp = h;
      out.radius = h.norm();
      out.certificate = cert;
      return out;
    }
    diag << " tau=" << tau << " worst_residual_b=" << cert.res_b
         << " d=(" << cert.res_d[0] << "," << cert.res_d[1] << ");";
  }

  std::ostringstream os;
  os << "no certified root on bracket [" << lo << ", " << hi << "] ("
     << candidates.size() << " candidate(s):" << diag.str() << ")";
  throw SolverError(os.str());
}

}  // namespace cheb
