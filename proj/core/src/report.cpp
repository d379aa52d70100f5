#include "cheb/report.hpp"

#include "json_util.hpp"

namespace cheb {
namespace {

using nlohmann::json;

json timings_to_json(const std::vector<std::pair<std::string, double>>& t) {
  json arr = json::array();
  for (const auto& [stage, ms] : t)
    arr.push_back(json{{"stage", stage}, {"ms", ms}});
  return arr;
}

json certificate_to_json(const CertificateABCD& cert) {
  return json{{"a_min_eig", cert.a_min_eig},
              {"res_b", cert.res_b},
              {"res_c", json::array({cert.res_c[0], cert.res_c[1]})},
              {"res_d", json::array({cert.res_d[0], cert.res_d[1]})},
              {"tolerance", cert.tolerance},
              {"passed", cert.passed}};
}

json dual_to_json(const DualSummary& dual) {
  return json{{"trace_residuals",
               json::array({dual.trace_residuals[0], dual.trace_residuals[1],
                            dual.trace_residuals[2]})},
              {"slackness", dual.slackness},
              {"lub_prime", dual.lub_prime}};
}

json oracle_to_json(const OracleReport& rep) {
  return json{{"sv_lower", rep.sv_lower},
              {"argmax_point", detail::vector_to_json(rep.argmax_point)},
              {"samples_used", rep.samples_used},
              {"seed", rep.seed},
              {"ascent_restarts", rep.ascent_restarts}};
}

}  // namespace

std::string result_to_json(const ResultDocument& doc) {
  json j;
  j["instance_digest"] = doc.instance_digest;
  j["method_used"] = doc.method_used;
  j["center"] = detail::vector_to_json(doc.center);
  j["radius"] = doc.radius;
  j["lub"] = doc.lub;
  if (doc.tau_sharp) j["tau_sharp"] = *doc.tau_sharp;
  if (doc.c) j["c"] = *doc.c;
  if (doc.d) j["d"] = *doc.d;
  if (doc.t) j["t"] = *doc.t;
  if (doc.certificate) j["certificate"] = certificate_to_json(*doc.certificate);
  if (doc.dual) j["dual"] = dual_to_json(*doc.dual);
  if (doc.oracle) j["oracle"] = oracle_to_json(*doc.oracle);
  if (doc.agree) j["agree"] = *doc.agree;
  if (doc.duality_gap) j["duality_gap"] = *doc.duality_gap;
  if (!doc.fallback.empty()) j["fallback"] = doc.fallback;
  if (doc.with_timings) j["timings"] = timings_to_json(doc.timings_ms);
  return detail::dump_17(j);
}

std::string global_to_json(const GlobalDocument& doc) {
  json j;
  j["instance_digest"] = doc.instance_digest;
  j["c_sharp"] = doc.c_sharp;
  j["d_sharp"] = doc.d_sharp;
  j["tau_sharp"] = doc.tau_sharp;
  j["sdp_value"] = doc.sdp_value;
  j["map_matrix"] = detail::matrix_to_json(doc.map_matrix);
  if (doc.gwce) j["gwce_estimate"] = *doc.gwce;
  if (doc.with_timings) j["timings"] = timings_to_json(doc.timings_ms);
  return detail::dump_17(j);
}

std::string verify_to_json(const VerifyDocument& doc) {
  json j;
  j["instance_digest"] = doc.instance_digest;
  j["samples"] = doc.samples;
  j["restarts"] = doc.restarts;
  j["seed"] = doc.seed;
  json checks = json::array();
  for (const CheckResult& c : doc.checks)
    checks.push_back(json{{"name", c.name},
                          {"measured", c.measured},
                          {"bound", c.bound},
                          {"passed", c.passed}});
  j["checks"] = std::move(checks);
  j["passed"] = doc.passed;
  return detail::dump_17(j);
}

}  // namespace cheb
