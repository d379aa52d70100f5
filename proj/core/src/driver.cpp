#include "cheb/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <type_traits>

#include "cheb/global.hpp"
#include "cheb/impeq.hpp"
#include "cheb/instance_io.hpp"
#include "cheb/oracle.hpp"
#include "cheb/regularize.hpp"
#include "cheb/sdp.hpp"
#include "barrier.hpp"

namespace cheb {
namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& sink)
      : sink_(sink) {}

  template <typename F>
  auto run(const std::string& stage, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      fn();
      record(stage, t0);
    } else {
      auto result = fn();
      record(stage, t0);
      return result;
    }
  }

 private:
  void record(const std::string& stage,
              std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    sink_.emplace_back(
        stage,
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt)
            .count());
  }

  std::vector<std::pair<std::string, double>>& sink_;
};

double witness_t(const ProblemInstance& inst, const ImpeqSolution& sol) {
  return sol.d_sharp * (inst.Lambda * sol.f_sharp).dot(inst.y);
}

DualSummary summarize(const DualWitness& witness) {
  DualSummary dual;
  dual.trace_residuals = witness.trace_residuals;
  dual.slackness = witness.slackness;
  dual.lub_prime = witness.lub_prime;
  return dual;
}

void attach_certified(const ProblemInstance& inst, const ImpeqSolution& sol,
                      ResultDocument& doc) {
  doc.tau_sharp = sol.tau_sharp;
  doc.certificate = sol.certificate;
  const double t_hat = witness_t(inst, sol);
  const DualWitness witness = build_dual_witness(
      inst, sol.f_sharp, sol.h_sharp, sol.c_sharp, sol.d_sharp, t_hat);
  doc.dual = summarize(witness);
}

}  // namespace

ResultDocument run_local(const ProblemInstance& inst, const RunOptions& opt) {
  if (opt.method != "auto" && opt.method != "impeq" && opt.method != "sdp" &&
      opt.method != "both")
    throw ValidationError("run_local: method must be auto, impeq, sdp or both");

  ResultDocument doc;
  doc.with_timings = opt.with_timings;
  StageClock clock(doc.timings_ms);

  clock.run("validate", [&] { validate(inst); });
  doc.instance_digest = instance_digest(inst);

  const bool want_impeq = opt.method != "sdp";
  const bool force_impeq = opt.method == "impeq";

  std::optional<ImpeqSolution> certified;
  if (want_impeq) {
    try {
      certified = clock.run("impeq", [&] { return solve_impeq(inst); });
    } catch (const Error& e) {
      if (force_impeq) throw;
      doc.fallback = e.what();
    }
  }

  if (opt.method == "impeq" || (opt.method == "auto" && certified)) {
    doc.method_used = "impeq";
    doc.radius = certified->radius;
    doc.lub = certified->radius * certified->radius;
    doc.center = inst.Q * certified->f_sharp;
    doc.c = certified->c_sharp;
    doc.d = certified->d_sharp;
    doc.t = witness_t(inst, *certified);
    attach_certified(inst, *certified, doc);
  } else {
    const SdpSolution sdp = clock.run("sdp", [&] { return solve_lub(inst); });
    doc.method_used = opt.method == "both" ? "both" : "sdp";
    doc.lub = sdp.lub;
    doc.radius = std::sqrt(std::max(sdp.lub, 0.0));
    doc.center = sdp.center;
    doc.c = sdp.c;
    doc.d = sdp.d;
    doc.t = sdp.t;
    if (certified) {
      doc.tau_sharp = certified->tau_sharp;
      attach_certified(inst, *certified, doc);
      if (doc.dual) doc.duality_gap = sdp.lub - doc.dual->lub_prime;
      doc.agree = std::abs(doc.radius - certified->radius) <=
                  opt.tol * (1.0 + certified->radius);
    }
  }

  if (opt.samples > 0) {
    doc.oracle = clock.run("oracle", [&] {
      return sv_lower_bound(inst, doc.center, opt.samples, opt.restarts,
                            opt.seed);
    });
  }
  return doc;
}

GlobalDocument run_global(const ProblemInstance& inst, const RunOptions& opt) {
  GlobalDocument doc;
  doc.with_timings = opt.with_timings;
  StageClock clock(doc.timings_ms);

  clock.run("validate", [&] { validate(inst); });
  doc.instance_digest = instance_digest(inst);

  const GlobalMap map = clock.run("solve", [&] { return solve_global(inst); });
  doc.c_sharp = map.c_sharp;
  doc.d_sharp = map.d_sharp;
  doc.tau_sharp = map.tau_sharp;
  doc.sdp_value = map.sdp_value;
  doc.map_matrix = map.map;

  if (opt.samples > 0) {
    doc.gwce = clock.run("gwce", [&] {
      return gwce_estimate(inst, map.map, opt.samples, opt.seed);
    });
  }
  return doc;
}

VerifyDocument run_verify(const ProblemInstance& inst, const RunOptions& opt) {
  const Tolerances& tol = tols();
  VerifyDocument doc;
  doc.samples = opt.samples;
  doc.restarts = opt.restarts;
  doc.seed = opt.seed;

  const ValidationReport vr = validate(inst);
  doc.instance_digest = instance_digest(inst);

  auto add = [&](const std::string& name, double measured, double bound) {
    doc.checks.push_back({name, measured, bound, measured <= bound});
  };

  RunOptions local_opt = opt;
  local_opt.method = "both";
  local_opt.samples = 0;
  local_opt.with_timings = false;
  const ResultDocument local = run_local(inst, local_opt);

  if (opt.samples > 0) {
    const OracleReport sandwich = sv_lower_bound(inst, local.center,
                                                 opt.samples, opt.restarts,
                                                 opt.seed);
    add("sandwich_lower_valid", sandwich.sv_lower,
        local.lub + 1e-9 * (1.0 + local.lub));
    add("sandwich_gap",
        (local.lub - sandwich.sv_lower) / std::max(local.lub, 1e-12),
        tol.sandwich_gap_rel);

    // Pointwise bound at randomly displaced query points: the sampled value
    // may never exceed the relaxation's upper bound.
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::int64_t z_budget = std::max<std::int64_t>(opt.samples / 10, 1024);
    const int z_restarts = std::max(opt.restarts / 5, 2);
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
      Vector z(local.center.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
      z = local.center + (1.0 + local.radius) * 0.3 * z;
      const OracleReport at_z =
          sv_lower_bound(inst, z, z_budget, z_restarts, opt.seed + 17 * (k + 1));
      const double ub = s_procedure_ub(inst, z);
      worst_excess = std::max(worst_excess, at_z.sv_lower - ub);
    }
    add("query_points_below_ub", worst_excess, tol.gwce_compare_abs);
  }

  if (local.certificate) {
    const CertificateABCD& cert = *local.certificate;
    const double worst =
        std::max({-cert.a_min_eig, cert.res_b, std::abs(cert.res_c[0]),
                  std::abs(cert.res_c[1]), std::abs(cert.res_d[0]),
                  std::abs(cert.res_d[1])});
    add("certificate_residuals", worst, cert.tolerance);
  }
  if (local.dual) {
    const DualSummary& dual = *local.dual;
    add("dual_trace_residuals",
        std::max({std::abs(dual.trace_residuals[0]),
                  std::abs(dual.trace_residuals[1]),
                  std::abs(dual.trace_residuals[2])}),
        tol.dual_trace_abs);
    add("dual_slackness", std::abs(dual.slackness), tol.slackness_abs);
    add("weak_duality", dual.lub_prime - local.lub, tol.weak_duality_abs);
    add("dual_matches_lub",
        std::abs(dual.lub_prime - local.lub) / (1.0 + local.lub),
        tol.dual_trace_abs);
  }

  if (vr.specific()) {
    try {
      const DeltaResult dr = compute_delta(inst);
      add("delta_two_routes", std::abs(dr.delta - dr.delta_alt),
          tol.delta_agree * (1.0 + dr.delta));
    } catch (const Error&) {
      add("delta_two_routes", 1e300, tol.delta_agree);
    }

    double worst_affine = 0.0;
    const double triples[3][3] = {
        {0.2, 0.35, 0.8}, {0.1, 0.5, 0.9}, {0.25, 0.6, 0.75}};
    for (const auto& t3 : triples) {
      const double res = affine_path_check(inst, t3[0], t3[1], t3[2]);
      const double scale = 1.0 + solve_tau(inst, t3[1]).f.norm();
      worst_affine = std::max(worst_affine, res / scale);
    }
    add("affine_path", worst_affine, tol.affine_residual);
  }

  {
    detail::BarrierSpec spec;
    spec.G0 = inst.Q.transpose() * inst.Q;
    spec.G1 = inst.gram_model();
    spec.G2 = inst.gram_data();
    const double s = detail::interior_scale(spec);
    const double pts[3][2] = {{s, s}, {2.0 * s, s}, {s, 3.0 * s}};
    double worst_grad = 0.0;
    for (const auto& p : pts) {
      const ReducedObjective ro = reduced_objective(inst, p[0], p[1]);
      const double hc = 1e-4 * (1.0 + p[0]);
      const double hd = 1e-4 * (1.0 + p[1]);
      const double fd_c = (reduced_objective(inst, p[0] + hc, p[1]).value -
                           reduced_objective(inst, p[0] - hc, p[1]).value) /
                          (2.0 * hc);
      const double fd_d = (reduced_objective(inst, p[0], p[1] + hd).value -
                           reduced_objective(inst, p[0], p[1] - hd).value) /
                          (2.0 * hd);
      worst_grad = std::max({worst_grad, std::abs(ro.gradient[0] - fd_c),
                             std::abs(ro.gradient[1] - fd_d)});
    }
    add("envelope_gradient", worst_grad, 1e-5);
  }

  doc.passed = true;
  for (const CheckResult& c : doc.checks) doc.passed = doc.passed && c.passed;
  return doc;
}

}  // namespace cheb
