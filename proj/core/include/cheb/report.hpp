#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cheb/impeq.hpp"
#include "cheb/oracle.hpp"

namespace cheb {

// Compact view of the dual witness kept in reports; the full PSD matrix is
// cheap to rebuild and only clutters the JSON.
struct DualSummary {
  std::array<double, 3> trace_residuals{};
  double slackness = 0.0;
  double lub_prime = 0.0;
};

struct ResultDocument {
  std::string instance_digest;
  std::string method_used;  // "impeq", "sdp" or "both"
  Vector center;
  double radius = 0.0;
  // Squared-radius bound. Equal to radius^2 by construction whenever the
  // relaxation ran; the certified route reports its own squared radius here.
  double lub = 0.0;
  std::optional<double> tau_sharp;
  std::optional<double> c;
  std::optional<double> d;
  std::optional<double> t;
  std::optional<CertificateABCD> certificate;
  std::optional<DualSummary> dual;
  std::optional<OracleReport> oracle;
  std::optional<bool> agree;          // both routes ran and matched
  std::optional<double> duality_gap;  // lub - lub'
  std::string fallback;  // why the certified route was not used, if so
  std::vector<std::pair<std::string, double>> timings_ms;
  bool with_timings = true;
};

std::string result_to_json(const ResultDocument& doc);

struct GlobalDocument {
  std::string instance_digest;
  double c_sharp = 0.0;
  double d_sharp = 0.0;
  double tau_sharp = 0.0;
  double sdp_value = 0.0;
  Matrix map_matrix;
  std::optional<double> gwce;  // sampled worst-case estimate, when requested
  std::vector<std::pair<std::string, double>> timings_ms;
  bool with_timings = true;
};

std::string global_to_json(const GlobalDocument& doc);

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;  // check passes iff measured <= bound
  bool passed = false;
};

struct VerifyDocument {
  std::string instance_digest;
  std::int64_t samples = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool passed = false;
};

// Verification output carries no timings, so identical inputs give
// byte-identical reports.
std::string verify_to_json(const VerifyDocument& doc);

}  // namespace cheb
