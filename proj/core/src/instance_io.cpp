#include "cheb/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json_util.hpp"

namespace cheb {
namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {"dim",     "m",       "projector",
                                  "subspace_basis", "R", "lambda",
                                  "S",       "Q",       "epsilon",
                                  "eta",     "y",       "class_hint"};

Eigen::Index require_index(const json& j, const char* key,
                           const std::string& origin) {
  if (!j.contains(key))
    throw IoError(origin + ": missing required field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw IoError(origin + ": field '" + std::string(key) +
                  "' must be a positive integer");
  return static_cast<Eigen::Index>(v.get<std::int64_t>());
}

double optional_number(const json& j, const char* key, double fallback,
                         const std::string& origin) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number())
    throw IoError(origin + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

}  // namespace

ProblemInstance parse_instance(const std::string& text,
                               const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw IoError(origin + ": top level must be an object");

  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : kKnownKeys)
      if (it.key() == key) known = true;
    if (!known) throw IoError(origin + ": unknown field '" + it.key() + "'");
  }

  ProblemInstance inst;
  inst.n = require_index(j, "dim", origin);
  inst.m = require_index(j, "m", origin);

  const int model_specs = static_cast<int>(j.contains("projector")) +
                          static_cast<int>(j.contains("subspace_basis")) +
                          static_cast<int>(j.contains("R"));
  if (model_specs != 1)
    throw IoError(origin +
                  ": exactly one of 'projector', 'subspace_basis', 'R' must be given");

  if (j.contains("projector")) {
    inst.R = detail::matrix_from_json(j.at("projector"), "projector");
    if (inst.R.rows() != inst.n || inst.R.cols() != inst.n)
      throw IoError(origin + ": 'projector' must be dim x dim");
  } else if (j.contains("subspace_basis")) {
    const auto& rows = j.at("subspace_basis");
    if (!rows.is_array() || rows.empty())
      throw IoError(origin + ": 'subspace_basis' must be a non-empty array of vectors");
    std::vector<Vector> basis;
    basis.reserve(rows.size());
    for (const auto& r : rows) {
      Vector v = detail::vector_from_json(r, "subspace_basis");
      if (v.size() != inst.n)
        throw IoError(origin + ": 'subspace_basis' vectors must have length dim");
      basis.push_back(std::move(v));
    }
    inst.R = projector_from_subspace(basis);
  } else {
    inst.R = detail::matrix_from_json(j.at("R"), "R");
    if (inst.R.cols() != inst.n)
      throw IoError(origin + ": 'R' must have dim columns");
  }

  if (!j.contains("lambda"))
    throw IoError(origin + ": missing required field 'lambda'");
  inst.Lambda = detail::matrix_from_json(j.at("lambda"), "lambda");
  if (inst.Lambda.rows() != inst.m || inst.Lambda.cols() != inst.n)
    throw IoError(origin + ": 'lambda' must be m x dim");

  inst.S = j.contains("S") ? detail::matrix_from_json(j.at("S"), "S")
                           : Matrix(Matrix::Identity(inst.m, inst.m));
  if (inst.S.cols() != inst.m)
    throw IoError(origin + ": 'S' must have m columns");

  inst.Q = j.contains("Q") ? detail::matrix_from_json(j.at("Q"), "Q")
                           : Matrix(Matrix::Identity(inst.n, inst.n));
  if (inst.Q.cols() != inst.n)
    throw IoError(origin + ": 'Q' must have dim columns");

  inst.epsilon = optional_number(j, "epsilon", 1.0, origin);
  inst.eta = optional_number(j, "eta", 1.0, origin);

  if (j.contains("y")) {
    inst.y = detail::vector_from_json(j.at("y"), "y");
    if (inst.y.size() != inst.m)
      throw IoError(origin + ": 'y' must have length m");
  } else {
    inst.y = Vector::Zero(inst.m);
  }

  if (j.contains("class_hint")) {
    const auto& hint = j.at("class_hint");
    if (!hint.is_string() ||
        (hint.get<std::string>() != "specific" &&
         hint.get<std::string>() != "general"))
      throw IoError(origin + ": 'class_hint' must be \"specific\" or \"general\"");
    inst.class_hint = hint.get<std::string>();
  }
  return inst;
}

ProblemInstance load_instance(const std::string& path) {
  return parse_instance(read_text_file(path), path);
}

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["dim"] = inst.n;
  j["m"] = inst.m;
  j["R"] = detail::matrix_to_json(inst.R);
  j["lambda"] = detail::matrix_to_json(inst.Lambda);
  j["S"] = detail::matrix_to_json(inst.S);
  j["Q"] = detail::matrix_to_json(inst.Q);
  j["epsilon"] = inst.epsilon;
  j["eta"] = inst.eta;
  j["y"] = detail::vector_to_json(inst.y);
  if (inst.class_hint) j["class_hint"] = *inst.class_hint;
  return detail::dump_17(j);
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  write_text_file(path, instance_to_json(inst));
}

std::string instance_digest(const ProblemInstance& inst) {
  return detail::fnv1a64_tag(instance_to_json(inst));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace cheb
