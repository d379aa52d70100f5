// Internal JSON helpers shared by instance_io, report and driver. Not
// installed; public headers must stay free of the vendored json dependency.
#pragma once

#include <string>

#include "json.hpp"

#include "cheb/types.hpp"

namespace cheb::detail {

// Serialize with two-space indentation and every floating-point number
// printed through %.17g, enough digits to round-trip a double exactly. The
// stock serializer prints shortest-roundtrip forms, which are also exact but
// make golden files depend on the library version; a pinned format does not.
std::string dump_17(const nlohmann::json& j);

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Matrix& a);

Vector vector_from_json(const nlohmann::json& j, const std::string& what);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);

// FNV-1a over the canonical serialization, rendered as "fnv1a64:<16 hex>".
std::string fnv1a64_tag(const std::string& bytes);

}  // namespace cheb::detail
