#pragma once

#include <string>

#include "cheb/model.hpp"

namespace cheb {

// JSON instance files. Schema: required `dim`, `m`, `lambda`, and exactly one
// of `projector` / `subspace_basis` / `R`; optional `S`, `Q`, `epsilon`,
// `eta`, `y`, `class_hint`. Matrices are row-major nested arrays of finite
// numbers. Missing optionals default to S = Q = Id, epsilon = eta = 1, y = 0.
ProblemInstance parse_instance(const std::string& text,
                               const std::string& origin = "<memory>");
ProblemInstance load_instance(const std::string& path);

// Canonical serialization: every field written explicitly (the model map is
// emitted as `R`, however it was specified), floats with 17 significant
// digits so values round-trip exactly.
std::string instance_to_json(const ProblemInstance& inst);
void save_instance(const ProblemInstance& inst, const std::string& path);

// Content hash of the canonical serialization, "fnv1a64:<16 hex digits>".
std::string instance_digest(const ProblemInstance& inst);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cheb
