#include "json_util.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace cheb::detail {
namespace {

using nlohmann::json;

void append_number(double v, std::string& out) {
  if (!std::isfinite(v))
    throw IoError("json: refusing to serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void dump_rec(const json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat arrays of numbers stay on one line; anything nested wraps.
      bool scalar_only = true;
      for (const auto& el : j)
        if (el.is_structured()) scalar_only = false;
      if (scalar_only) {
        out += "[";
        bool first = true;
        for (const auto& el : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(el, out, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(el, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      append_number(j.get<double>(), out);
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_17(const json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array())
    throw IoError("json: field '" + what + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& el : j) {
    if (!el.is_number())
      throw IoError("json: field '" + what + "' must contain only numbers");
    v(i++) = el.get<double>();
  }
  if (!v.allFinite())
    throw IoError("json: field '" + what + "' contains non-finite values");
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw IoError("json: field '" + what + "' must be a non-empty array of rows");
  const auto cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0)
    throw IoError("json: field '" + what + "' rows must be non-empty arrays");
  Matrix a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  Eigen::Index i = 0;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols)
      throw IoError("json: field '" + what + "' rows must all have length " +
                    std::to_string(cols));
    Eigen::Index k = 0;
    for (const auto& el : row) {
      if (!el.is_number())
        throw IoError("json: field '" + what + "' must contain only numbers");
      a(i, k++) = el.get<double>();
    }
    ++i;
  }
  if (!a.allFinite())
    throw IoError("json: field '" + what + "' contains non-finite values");
  return a;
}

std::string fnv1a64_tag(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h);
  return buf;
}

}  // namespace cheb::detail
