#include "smash/value.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "smash/error.hpp"

namespace smash {

const char* to_string(ColumnType type) {
  switch (type) {
    case ColumnType::Int: return "int";
    case ColumnType::Float: return "float";
    case ColumnType::String: return "string";
  }
  return "string";
}

ColumnType column_type_from_string(const std::string& name) {
  if (name == "int" || name == "integer" || name == "int64" || name == "bigint") return ColumnType::Int;
  if (name == "float" || name == "double" || name == "float64" || name == "real") return ColumnType::Float;
  if (name == "string" || name == "text" || name == "varchar" || name == "date") return ColumnType::String;
  throw Error(ErrorCode::Io, "unknown column type '" + name + "'");
}

ColumnType type_of(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return ColumnType::Int;
  if (std::holds_alternative<double>(v)) return ColumnType::Float;
  return ColumnType::String;
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw Error(ErrorCode::TypeMismatch, "string value '" + std::get<std::string>(v) + "' used as number");
}

int compare(const Value& a, const Value& b) {
  if (const auto* ia = std::get_if<std::int64_t>(&a)) {
    if (const auto* ib = std::get_if<std::int64_t>(&b)) return (*ia > *ib) - (*ia < *ib);
  }
  const bool sa = std::holds_alternative<std::string>(a);
  const bool sb = std::holds_alternative<std::string>(b);
  if (sa != sb) {
    throw Error(ErrorCode::TypeMismatch, "cannot compare '" + to_text(a) + "' with '" + to_text(b) + "'");
  }
  if (sa) {
    const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return (c > 0) - (c < 0);
  }
  const double da = as_double(a);
  const double db = as_double(b);
  return (da > db) - (da < db);
}

bool join_equal(const Value& a, const Value& b) {
  if (a.index() == b.index()) return a == b;
  if (std::holds_alternative<std::string>(a) || std::holds_alternative<std::string>(b)) return false;
  return as_double(a) == as_double(b);
}

bool total_less(const Value& a, const Value& b) {
  const bool sa = std::holds_alternative<std::string>(a);
  const bool sb = std::holds_alternative<std::string>(b);
  if (sa != sb) return !sa;
  if (sa) return std::get<std::string>(a) < std::get<std::string>(b);
  if (a.index() == b.index() && std::holds_alternative<std::int64_t>(a))
    return std::get<std::int64_t>(a) < std::get<std::int64_t>(b);
  const double da = as_double(a);
  const double db = as_double(b);
  if (da != db) return da < db;
  // Equal numerically: order ints before floats so the order stays strict.
  return a.index() < b.index();
}

std::size_t hash_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::hash<std::int64_t>{}(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    // Integral doubles hash like the equal int64 so join_equal stays consistent.
    if (std::isfinite(*d) && *d == std::floor(*d) && std::fabs(*d) < 9.0e18)
      return std::hash<std::int64_t>{}(static_cast<std::int64_t>(*d));
    return std::hash<double>{}(*d);
  }
  return std::hash<std::string>{}(std::get<std::string>(v));
}

std::string to_text(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), *d);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  return std::get<std::string>(v);
}

std::string to_sql_literal(const Value& v) {
  if (!std::holds_alternative<std::string>(v)) return to_text(v);
  std::string out = "'";
  for (char c : std::get<std::string>(v)) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

Value parse_cell(const std::string& text, ColumnType type) {
  switch (type) {
    case ColumnType::Int: {
      std::int64_t out = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), out);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error(ErrorCode::TypeMismatch, "'" + text + "' is not an integer");
      return out;
    }
    case ColumnType::Float: {
      std::size_t pos = 0;
      double out = 0;
      try {
        out = std::stod(text, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != text.size() || text.empty()) throw Error(ErrorCode::TypeMismatch, "'" + text + "' is not a number");
      return out;
    }
    case ColumnType::String: return text;
  }
  return text;
}

bool tuple_total_less(const Tuple& a, const Tuple& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (total_less(a[i], b[i])) return true;
    if (total_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

}  // namespace smash
