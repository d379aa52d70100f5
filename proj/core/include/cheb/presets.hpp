#pragma once

#include <cstdint>

#include "cheb/model.hpp"

namespace cheb {

// Canonical worked instances used across tests and documentation.
//
// rec1: unit square. Model constrains the second coordinate, data the first,
//       both budgets 1, data 0. Center (0,0), radius sqrt(2).
// rec2: rec1 with epsilon = 2 and data 0.3. Center (0.3, 0), radius sqrt(5).
// ball1: slab |f_1| <= 2 intersected with the unit ball around (0.5, 0).
//       The slab is inactive, so the set is the ball itself: center (0.5, 0),
//       radius 1. The scalar-equation route declines this one (its root
//       carries no valid certificate) and the relaxation route takes over.
ProblemInstance rec1();
ProblemInstance rec2();
ProblemInstance ball1();

// Product instance: Lambda reads the first m coordinates, the model bounds
// the remaining dim - m. y must have length m.
ProblemInstance rectangle_instance(Eigen::Index dim, Eigen::Index m,
                                   double epsilon, double eta, const Vector& y);

// Rank-one model constraint |f_1| <= epsilon with full observation of all
// dim coordinates. y must have length dim.
ProblemInstance ball_in_slab_instance(Eigen::Index dim, double epsilon,
                                      double eta, const Vector& y);

// Seeded random instance in the projector / orthonormal-rows / S = Q = Id
// regime: random subspace projector, QR-orthonormalized observation rows,
// budgets in [0.5, 2]. Draws are rejected until the joint kernel condition
// holds with margin, so generated instances are numerically comfortable.
ProblemInstance random_specific(Eigen::Index dim, Eigen::Index m,
                                std::uint64_t seed);

// Seeded random instance with square Gaussian R, S, Q and a general Lambda,
// rejected until the joint kernel condition holds with margin.
ProblemInstance random_general(Eigen::Index dim, Eigen::Index m,
                               std::uint64_t seed);

}  // namespace cheb
