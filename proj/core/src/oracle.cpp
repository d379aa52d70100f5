#include "cheb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "cheb/parallel.hpp"
#include "cheb/regularize.hpp"

namespace cheb {
namespace {

constexpr double kChordSentinel = 1e8;
constexpr std::int64_t kChunkSize = 1024;
constexpr int kBurnIn = 64;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Solution set of a t^2 + b t + c <= 0 with a >= 0, as stepped along a chord
// from a feasible point (so c <= 0 up to roundoff). Degenerate quadratics
// fall back to half-lines or the sentinel-bounded whole line.
Interval chord_interval(double a, double b, double c) {
  if (a > 1e-14 * (1.0 + std::abs(b) + std::abs(c))) {
    const double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double root = std::sqrt(disc);
    return {(-b - root) / (2.0 * a), (-b + root) / (2.0 * a)};
  }
  if (std::abs(b) > 1e-14 * (1.0 + std::abs(c))) {
    const double bound = -c / b;
    return b > 0.0 ? Interval{-kChordSentinel, bound}
                   : Interval{bound, kChordSentinel};
  }
  return {-kChordSentinel, kChordSentinel};
}

// Shared per-instance operators for chord computations.
struct ChordOps {
  Matrix slam;  // S Lambda
  Vector sy;    // S y
  double eps2 = 0.0;
  double eta2 = 0.0;

  explicit ChordOps(const ProblemInstance& inst)
      : slam(inst.S * inst.Lambda),
        sy(inst.S * inst.y),
        eps2(inst.epsilon * inst.epsilon),
        eta2(inst.eta * inst.eta) {}

  Interval feasible_span(const ProblemInstance& inst, const Vector& x,
                         const Vector& u) const {
    const Vector rx = inst.R * x;
    const Vector ru = inst.R * u;
    const Interval model = chord_interval(ru.squaredNorm(), 2.0 * rx.dot(ru),
                                          rx.squaredNorm() - eps2);
    const Vector wx = slam * x - sy;
    const Vector wu = slam * u;
    const Interval data = chord_interval(wu.squaredNorm(), 2.0 * wx.dot(wu),
                                         wx.squaredNorm() - eta2);
    return {std::max(model.lo, data.lo), std::min(model.hi, data.hi)};
  }
};

Vector random_direction(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector u(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) u(i) = gauss(rng);
    norm = u.norm();
  } while (norm < 1e-12);
  return u / norm;
}

void hit_and_run_step(const ProblemInstance& inst, const ChordOps& ops,
                      Vector& x, std::mt19937_64& rng) {
  const Vector u = random_direction(rng, inst.n);
  const Interval span = ops.feasible_span(inst, x, u);
  if (!(span.hi > span.lo)) return;  // grazing chord, keep the point
  std::uniform_real_distribution<double> unif(span.lo, span.hi);
  x += unif(rng) * u;
}

// Projection onto one sublevel set { u : u^T A u - 2 b^T u + c0 <= rho2 }
// through the eigendecomposition of A. The multiplier path
// u(nu) = (I + nu A)^{-1} (x + nu b) drives the constraint monotonically
// down, so a bracketed Newton on nu is safe.
class EllipsoidProjector {
 public:
  EllipsoidProjector(const Matrix& gram, const Vector& b, double c0,
                     double rho2)
      : c0_(c0), rho2_(rho2) {
    const Spectrum spec = eig_sym(SymMatrix(gram));
    const Eigen::Index n = gram.rows();
    basis_.resize(n, n);
    values_.resize(n);
    Eigen::Index col = 0;
    for (const EigenPair& g : spec.groups)
      for (Eigen::Index j = 0; j < g.multiplicity(); ++j) {
        basis_.col(col) = g.vectors.col(j);
        values_(col) = std::max(g.value, 0.0);
        ++col;
      }
    bcoef_ = basis_.transpose() * b;
  }

  double constraint(const Vector& u) const {
    const Vector uc = basis_.transpose() * u;
    double v = c0_ - rho2_;
    for (Eigen::Index i = 0; i < uc.size(); ++i)
      v += values_(i) * uc(i) * uc(i) - 2.0 * bcoef_(i) * uc(i);
    return v;
  }

  Vector project(const Vector& x) const {
    if (constraint(x) <= 0.0) return x;
    const Vector xc = basis_.transpose() * x;

    auto point_at = [&](double nu) {
      Vector uc(xc.size());
      for (Eigen::Index i = 0; i < xc.size(); ++i)
        uc(i) = (xc(i) + nu * bcoef_(i)) / (1.0 + nu * values_(i));
      return uc;
    };
    auto value_at = [&](const Vector& uc) {
      double v = c0_ - rho2_;
      for (Eigen::Index i = 0; i < uc.size(); ++i)
        v += values_(i) * uc(i) * uc(i) - 2.0 * bcoef_(i) * uc(i);
      return v;
    };
    auto slope_at = [&](double nu, const Vector& uc) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < uc.size(); ++i) {
        const double du = (bcoef_(i) - values_(i) * xc(i)) /
                          ((1.0 + nu * values_(i)) * (1.0 + nu * values_(i)));
        s += 2.0 * (values_(i) * uc(i) - bcoef_(i)) * du;
      }
      return s;
    };

    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (value_at(point_at(hi)) > 0.0 && doublings < 200) {
      lo = hi;
      hi *= 2.0;
      ++doublings;
    }
    if (value_at(point_at(hi)) > 0.0)
      throw NumericalError("ellipsoid projection: no feasible multiplier");

    const double gtol = 1e-13 * (1.0 + std::abs(rho2_) + std::abs(c0_));
    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const Vector uc = point_at(nu);
      const double g = value_at(uc);
      if (std::abs(g) <= gtol) break;
      if (g > 0.0)
        lo = nu;
      else
        hi = nu;
      const double dg = slope_at(nu, uc);
      double next = (std::abs(dg) > 1e-300) ? nu - g / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      nu = next;
      if (hi - lo <= 1e-15 * (1.0 + hi)) break;
    }
    return basis_ * point_at(nu);
  }

 private:
  Matrix basis_;
  Vector values_;
  Vector bcoef_;
  double c0_ = 0.0;
  double rho2_ = 0.0;
};

// Alternating projections onto the two constraint sets, with a final shrink
// toward a strictly interior anchor so returned points are never infeasible
// beyond roundoff.
class FeasibleProjector {
 public:
  FeasibleProjector(const ProblemInstance& inst, Vector anchor)
      : inst_(inst),
        anchor_(std::move(anchor)),
        model_(inst.gram_model(), Vector::Zero(inst.n), 0.0,
               inst.epsilon * inst.epsilon),
        data_(inst.gram_data(), inst.data_pullback(),
              (inst.S * inst.y).squaredNorm(), inst.eta * inst.eta) {}

  Vector operator()(Vector p) const {
    const Tolerances& tol = tols();
    const double slack_floor =
        -1e-12 * (1.0 + inst_.epsilon * inst_.epsilon +
                  inst_.eta * inst_.eta);
    for (int it = 0; it < tol.projection_max_iter; ++it) {
      if (model_.constraint(p) <= -slack_floor &&
          data_.constraint(p) <= -slack_floor)
        break;
      p = model_.project(p);
      p = data_.project(p);
    }
    if (membership(inst_, p).feasible()) return p;
    // Bisect the segment back to the interior anchor for a feasible point as
    // close to p as possible.
    double good = 0.0;
    double bad = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (good + bad);
      const Vector q = anchor_ + mid * (p - anchor_);
      (membership(inst_, q).feasible() ? good : bad) = mid;
    }
    return anchor_ + good * (p - anchor_);
  }

 private:
  const ProblemInstance& inst_;
  Vector anchor_;
  EllipsoidProjector model_;
  EllipsoidProjector data_;
};

}  // namespace

Vector feasible_start(const ProblemInstance& inst) {
  validate(inst);
  const double scale =
      inst.epsilon * inst.epsilon + inst.eta * inst.eta;
  const double margin = 1e-12 * (1.0 + scale);

  auto min_slack = [&](const Vector& f) {
    const Membership mem = membership(inst, f);
    return std::min(mem.slack_model, mem.slack_data);
  };

  const RegularizedSolution equal = solve_cd(inst, 1.0, 1.0);
  if (min_slack(equal.f) > margin) return equal.f;

  Vector best = equal.f;
  double best_slack = min_slack(equal.f);
  for (int k = 1; k <= 99; ++k) {
    const RegularizedSolution sol = solve_tau(inst, 0.01 * k);
    const double s = min_slack(sol.f);
    if (s > best_slack) {
      best_slack = s;
      best = sol.f;
    }
  }
  if (best_slack <= 0.0)
    throw SolverError(
        "feasible_start: the regularization path found no interior point; "
        "the feasible set is empty or has no interior");
  return best;
}

std::vector<Vector> sample_feasible(const ProblemInstance& inst,
                                    std::int64_t count, std::uint64_t seed) {
  validate(inst);
  if (count <= 0) return {};

  const Vector x0 = feasible_start(inst);
  const ChordOps ops(inst);
  const std::int64_t chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<Vector> out(static_cast<std::size_t>(count));

  parallel_chunks(chunks, [&](std::int64_t k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    Vector x = x0;
    for (int b = 0; b < kBurnIn; ++b) hit_and_run_step(inst, ops, x, rng);
    const std::int64_t lo = k * kChunkSize;
    const std::int64_t hi = std::min(count, lo + kChunkSize);
    for (std::int64_t i = lo; i < hi; ++i) {
      hit_and_run_step(inst, ops, x, rng);
      out[static_cast<std::size_t>(i)] = x;
    }
  });
  return out;
}

OracleReport sv_lower_bound(const ProblemInstance& inst, const Vector& z,
                            std::int64_t samples, int restarts,
                            std::uint64_t seed) {
  validate(inst);
  if (z.size() != inst.Q.rows())
    throw ValidationError("sv_lower_bound: z must have Q's output dimension");

  OracleReport report;
  report.seed = seed;
  report.ascent_restarts = std::max(restarts, 0);

  std::vector<Vector> points = sample_feasible(inst, std::max<std::int64_t>(samples, 0), seed);
  report.samples_used = static_cast<std::int64_t>(points.size());
  const Vector anchor = feasible_start(inst);
  if (points.empty()) points.push_back(anchor);

  auto value = [&](const Vector& f) { return (inst.Q * f - z).squaredNorm(); };

  const std::int64_t n_pts = static_cast<std::int64_t>(points.size());
  std::vector<double> vals(points.size());
  parallel_chunks((n_pts + kChunkSize - 1) / kChunkSize, [&](std::int64_t k) {
    const std::int64_t lo = k * kChunkSize;
    const std::int64_t hi = std::min(n_pts, lo + kChunkSize);
    for (std::int64_t i = lo; i < hi; ++i)
      vals[static_cast<std::size_t>(i)] =
          value(points[static_cast<std::size_t>(i)]);
  });

  std::size_t arg = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[arg]) arg = i;
  report.sv_lower = vals[arg];
  report.argmax_point = points[arg];

  const int n_restarts =
      static_cast<int>(std::min<std::int64_t>(report.ascent_restarts, n_pts));
  if (n_restarts == 0) return report;

  // Indices of the best starting samples, value-descending with index
  // tie-break so the selection is deterministic.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + n_restarts, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (vals[a] != vals[b]) return vals[a] > vals[b];
                      return a < b;
                    });

  const FeasibleProjector project(inst, anchor);
  const double q_norm = eig_sym(SymMatrix(Matrix(inst.Q.transpose() * inst.Q))).norm2;
  const Tolerances& tol = tols();

  std::vector<std::pair<double, Vector>> refined(
      static_cast<std::size_t>(n_restarts));
  parallel_chunks(n_restarts, [&](std::int64_t r) {
    Vector x = points[order[static_cast<std::size_t>(r)]];
    double best = value(x);
    Vector best_x = x;
    double step = (1.0 + x.norm()) / (2.0 * (1.0 + q_norm));
    for (int it = 0; it < tol.ascent_max_iter; ++it) {
      const Vector grad = 2.0 * (inst.Q.transpose() * (inst.Q * x - z));
      if (grad.norm() <= 1e-14 * (1.0 + best)) break;
      const Vector trial = project(x + step * grad);
      const double v = value(trial);
      if (v > best) {
        x = trial;
        best = v;
        best_x = x;
        step *= 1.6;
      } else {
        step *= 0.5;
        if (step <= 1e-12 * (1.0 + x.norm())) break;
      }
    }
    refined[static_cast<std::size_t>(r)] = {best, std::move(best_x)};
  });

  for (const auto& [v, x] : refined)
    if (v > report.sv_lower) {
      report.sv_lower = v;
      report.argmax_point = x;
    }
  return report;
}

GridChebyshev grid_chebyshev_2d(const ProblemInstance& inst,
                                double grid_step) {
  validate(inst);
  if (inst.n != 2)
    throw ValidationError("grid_chebyshev_2d: unsupported dimension, n must be 2");
  if (!inst.q_is_identity())
    throw ValidationError("grid_chebyshev_2d: Q must be the identity");
  if (!(grid_step > 0.0))
    throw ValidationError("grid_chebyshev_2d: grid_step must be positive");

  const Vector x0 = feasible_start(inst);
  const ChordOps ops(inst);

  auto boundary_at = [&](double theta) {
    Vector u(2);
    u << std::cos(theta), std::sin(theta);
    const Interval span = ops.feasible_span(inst, x0, u);
    return Vector(x0 + std::max(span.hi, 0.0) * u);
  };

  const double two_pi = 2.0 * std::acos(-1.0);
  double r_max = 0.0;
  for (int k = 0; k < 512; ++k) {
    const Vector b = boundary_at(two_pi * k / 512.0);
    r_max = std::max(r_max, (b - x0).norm());
  }
  const double wanted = std::ceil(two_pi * r_max / grid_step);
  const std::int64_t n_rays = static_cast<std::int64_t>(
      std::clamp(wanted, 256.0, 100000.0));

  Matrix boundary(2, n_rays);
  for (std::int64_t k = 0; k < n_rays; ++k)
    boundary.col(k) = boundary_at(two_pi * static_cast<double>(k) /
                                  static_cast<double>(n_rays));

  auto worst = [&](double zx, double zy) {
    double w2 = 0.0;
    for (std::int64_t k = 0; k < n_rays; ++k) {
      const double dx = boundary(0, k) - zx;
      const double dy = boundary(1, k) - zy;
      w2 = std::max(w2, dx * dx + dy * dy);
    }
    return std::sqrt(w2);
  };

  const double lo_x = boundary.row(0).minCoeff();
  const double hi_x = boundary.row(0).maxCoeff();
  const double lo_y = boundary.row(1).minCoeff();
  const double hi_y = boundary.row(1).maxCoeff();

  GridChebyshev out;
  out.center = 0.5 * Vector((Vector(2) << lo_x + hi_x, lo_y + hi_y).finished());
  out.radius = worst(out.center(0), out.center(1));

  double span = std::max({hi_x - lo_x, hi_y - lo_y, grid_step});
  double step = std::max(span / 48.0, grid_step);
  double cx = out.center(0);
  double cy = out.center(1);
  double half_x = 0.5 * (hi_x - lo_x) + step;
  double half_y = 0.5 * (hi_y - lo_y) + step;

  while (true) {
    const std::int64_t nx =
        static_cast<std::int64_t>(std::ceil(2.0 * half_x / step)) + 1;
    const std::int64_t ny =
        static_cast<std::int64_t>(std::ceil(2.0 * half_y / step)) + 1;
    double best = std::numeric_limits<double>::infinity();
    double best_x = cx;
    double best_y = cy;
    std::int64_t ties = 0;
    for (std::int64_t i = 0; i < nx; ++i)
      for (std::int64_t j = 0; j < ny; ++j) {
        const double zx = cx - half_x + 2.0 * half_x * (nx == 1 ? 0.5 : static_cast<double>(i) / (nx - 1));
        const double zy = cy - half_y + 2.0 * half_y * (ny == 1 ? 0.5 : static_cast<double>(j) / (ny - 1));
        const double w = worst(zx, zy);
        if (w < best) {
          best = w;
          best_x = zx;
          best_y = zy;
        }
      }
    if (step <= grid_step) {
      // Tie census over the same final grid for the uniqueness probe.
      for (std::int64_t i = 0; i < nx; ++i)
        for (std::int64_t j = 0; j < ny; ++j) {
          const double zx = cx - half_x + 2.0 * half_x * (nx == 1 ? 0.5 : static_cast<double>(i) / (nx - 1));
          const double zy = cy - half_y + 2.0 * half_y * (ny == 1 ? 0.5 : static_cast<double>(j) / (ny - 1));
          if (worst(zx, zy) <= best + 0.1 * grid_step) ++ties;
        }
      out.near_optimal_cells = ties;
    }
    if (best < out.radius) {
      out.radius = best;
      out.center(0) = best_x;
      out.center(1) = best_y;
    }
    cx = out.center(0);
    cy = out.center(1);
    if (step <= grid_step) break;
    half_x = 2.5 * step;
    half_y = 2.5 * step;
    step = std::max(step / 3.0, grid_step);
  }
  return out;
}

}  // namespace cheb
