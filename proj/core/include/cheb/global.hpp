#pragma once

#include <cstdint>

#include "cheb/model.hpp"

namespace cheb {

// Globally optimal linear estimation of Q f from y = Lambda f + e over the
// whole model/uncertainty family:
//   minimize c eps^2 + d eta^2  s.t.  c P^T P + d Lambda^T Lambda >= Q^T Q.
// The optimal map is Q composed with the regularizer at
// tau_sharp = d_sharp / (c_sharp + d_sharp).
struct GlobalMap {
  double c_sharp = 0.0;
  double d_sharp = 0.0;
  double tau_sharp = 0.0;
  double sdp_value = 0.0;  // c eps^2 + d eta^2 at the optimum
  Matrix map;              // q x m, acts on observation vectors
};

// Requires S = Id (plain Euclidean error ball); throws ValidationError
// otherwise. General (non-projector) P is allowed.
GlobalMap solve_global(const ProblemInstance& inst);

// Sampled estimate of the global worst-case error
//   sup { ||Q f - map (Lambda f + e)|| : ||R f|| <= eps, ||S e|| <= eta }
// over boundary samples with ascent refinement toward extreme points.
// Unbounded directions (kernel of the constraint operators) are explored up
// to a large cap, so a map that leaks kernel directions shows up with a
// conspicuously large estimate instead of a silent one. Deterministic for a
// fixed seed; sample sets are nested as the count grows.
double gwce_estimate(const ProblemInstance& inst, const Matrix& map,
                     std::int64_t samples, std::uint64_t seed);

}  // namespace cheb
