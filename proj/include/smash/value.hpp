#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace smash {

/// Scalar cell value. Dates are ISO strings and compare lexicographically.
using Value = std::variant<std::int64_t, double, std::string>;
using Tuple = std::vector<Value>;

enum class ColumnType { Int, Float, String };

const char* to_string(ColumnType type);
ColumnType column_type_from_string(const std::string& name);
ColumnType type_of(const Value& v);

inline bool is_numeric(const Value& v) { return !std::holds_alternative<std::string>(v); }
double as_double(const Value& v);

/// Three-way comparison of comparable values (numeric vs numeric, string vs
/// string). Throws TypeMismatch otherwise.
int compare(const Value& a, const Value& b);

/// Equality used by joins: numerics compare by value across int/float,
/// a string never equals a number.
bool join_equal(const Value& a, const Value& b);

/// Strict total order over all values (numbers before strings), used for
/// canonical sorting of multisets.
bool total_less(const Value& a, const Value& b);

std::size_t hash_value(const Value& v);

/// Text rendering used in CSV output and generated SQL literals (strings
/// are returned unquoted).
std::string to_text(const Value& v);
/// SQL literal rendering: strings single-quoted with '' escaping.
std::string to_sql_literal(const Value& v);

/// Parses a CSV cell under the inferred column type.
Value parse_cell(const std::string& text, ColumnType type);

struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& v : t) h ^= hash_value(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct TupleJoinEqual {
  bool operator()(const Tuple& a, const Tuple& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!join_equal(a[i], b[i])) return false;
    return true;
  }
};

bool tuple_total_less(const Tuple& a, const Tuple& b);

}  // namespace smash
