#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cheb/linalg.hpp"
#include "cheb/types.hpp"

namespace cheb {

// Recovery problem over R^n: model set {f : ||R f|| <= epsilon}, data
// y = Lambda f + e with ||S e|| <= eta, and a quantity of interest Q f.
//
// The "specific" structure (R an orthogonal projector P, Lambda with
// orthonormal rows, S = Q = Id) unlocks the closed-form machinery; anything
// else is handled as "general" by the relaxation route only.
struct ProblemInstance {
  Eigen::Index n = 0;  // ambient dimension
  Eigen::Index m = 0;  // number of observations
  Matrix R;            // r x n model map (P itself in the specific case)
  Matrix Lambda;       // m x n observation map
  Matrix S;            // s x m error-shaping map
  Matrix Q;            // q x n quantity-of-interest map
  double epsilon = 1.0;
  double eta = 1.0;
  Vector y;            // m observations
  std::optional<std::string> class_hint;  // "specific" or "general"

  bool s_is_identity() const;
  bool q_is_identity() const;

  // Frequently used derived operators.
  Matrix gram_model() const;   // R^T R
  Matrix gram_data() const;    // Lambda^T S^T S Lambda
  Vector data_pullback() const;  // Lambda^T S^T S y
};

enum class InstanceClass { specific, general };

struct AssumptionCheck {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct ValidationReport {
  InstanceClass cls = InstanceClass::general;
  std::vector<AssumptionCheck> checks;
  bool specific() const { return cls == InstanceClass::specific; }
};

// Structural validation. Hard failures (shape mismatch, non-finite entries,
// nonpositive budgets, zero Q, degenerate joint kernel) throw
// ValidationError. Failures of the specific-case assumptions merely classify
// the instance as general, unless class_hint == "specific" in which case they
// are reported as errors too.
ValidationReport validate(const ProblemInstance& inst);

// Orthogonal projector onto the complement of span(basis):
// Id - V (V^T V)^{-1} V^T. Throws for a dependent basis.
Matrix projector_from_subspace(const std::vector<Vector>& basis);

struct Membership {
  double slack_model = 0.0;  // epsilon^2 - ||R f||^2
  double slack_data = 0.0;   // eta^2 - ||S (y - Lambda f)||^2
  bool in_model_set = false;
  bool in_data_set = false;
  bool feasible() const { return in_model_set && in_data_set; }
};

Membership membership(const ProblemInstance& inst, const Vector& f);

}  // namespace cheb
