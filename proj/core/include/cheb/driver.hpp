#pragma once

#include <cstdint>
#include <string>

#include "cheb/model.hpp"
#include "cheb/report.hpp"

namespace cheb {

struct RunOptions {
  std::string method = "auto";  // local solve: auto | impeq | sdp | both
  double tol = 1e-6;            // route-agreement tolerance for method=both
  std::int64_t samples = 0;     // sampling budget; 0 skips sampling stages
  int restarts = 10;
  std::uint64_t seed = 1;
  bool with_timings = true;
};

// Center/radius solve. auto tries the certified scalar route and falls back
// to the relaxation, recording why; both runs the two routes and reports
// their agreement. A positive sample budget appends an oracle lower bound at
// the computed center.
ResultDocument run_local(const ProblemInstance& inst, const RunOptions& opt);

// Globally optimal linear map report; a positive sample budget appends the
// sampled worst-case error of the map.
GlobalDocument run_global(const ProblemInstance& inst, const RunOptions& opt);

// Executable invariant suite: sandwich bounds, certificate and dual checks,
// the two-route delta agreement, the affine parameter path, and envelope
// gradients against finite differences. Checks that do not apply to the
// instance class are omitted rather than faked.
VerifyDocument run_verify(const ProblemInstance& inst, const RunOptions& opt);

}  // namespace cheb
