#pragma once

#include <cstdint>
#include <vector>

#include "cheb/model.hpp"

namespace cheb {

// Brute-force ground truth at small scale. Everything here is sampling or
// grid search over the feasible set
//   K = { f : ||R f|| <= epsilon, ||S (y - Lambda f)|| <= eta },
// used to bound the quantities the solvers compute analytically.

// Strictly feasible interior point of K. Tries the equal-weight regularizer
// first, then sweeps the regularization path and keeps the point with the
// largest minimum slack. Throws SolverError when no interior point is found
// (empty or flat feasible set).
Vector feasible_start(const ProblemInstance& inst);

// Hit-and-run samples of K. Chains are run per 1024-sample chunk with the
// chunk rng seeded by seed + chunk index, so sample prefixes are reproducible
// and growing `count` only appends.
std::vector<Vector> sample_feasible(const ProblemInstance& inst,
                                    std::int64_t count, std::uint64_t seed);

struct OracleReport {
  double sv_lower = 0.0;   // max of ||Q f - z||^2 over explored feasible f
  Vector argmax_point;     // the f achieving sv_lower
  std::int64_t samples_used = 0;
  std::uint64_t seed = 0;
  int ascent_restarts = 0;
};

// Sampled lower bound on sup { ||Q f - z||^2 : f in K }. Evaluates all
// samples, then refines the `restarts` best by projected gradient ascent
// (projection back onto K via alternating ellipsoid projections). Every
// point that enters the max is feasible, so the bound is valid.
OracleReport sv_lower_bound(const ProblemInstance& inst, const Vector& z,
                            std::int64_t samples, int restarts,
                            std::uint64_t seed);

struct GridChebyshev {
  Vector center;
  double radius = 0.0;
  // Final-level grid nodes whose worst-case distance ties the best within one
  // grid step; 1 signals a unique minimizing cell at the chosen resolution.
  std::int64_t near_optimal_cells = 0;
};

// Exhaustive search for the smallest enclosing ball of K in the plane:
// the boundary of K is discretized by ray shooting from an interior point and
// the center minimizes the worst distance over a multilevel grid. Requires
// n = 2 and Q = Id; accuracy is O(grid_step).
GridChebyshev grid_chebyshev_2d(const ProblemInstance& inst, double grid_step);

}  // namespace cheb
