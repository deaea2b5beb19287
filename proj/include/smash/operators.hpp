#pragma once

#include <span>
#include <string>
#include <vector>

#include "smash/relation.hpp"

namespace smash {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_sql(CompareOp op);
CompareOp flip(CompareOp op);
bool holds(CompareOp op, int three_way);

struct Predicate {
  std::string attribute;
  CompareOp op = CompareOp::Eq;
  Value literal;
  /// CAST(attribute AS INTEGER): string cells are read as numbers.
  bool cast_to_number = false;
};

/// Throws TypeMismatch when the literal cannot be compared with a column of
/// the given type.
void check_predicate_type(const Predicate& p, ColumnType column_type);
bool predicate_holds(const Predicate& p, const Value& cell);

enum class AggFn { Min, Max, Count, Sum, Avg };

const char* to_sql(AggFn fn);

struct AggregateSpec {
  AggFn fn = AggFn::Min;
  /// Empty means COUNT(*).
  std::string attribute;
  bool distinct = false;
  std::string output_name;
};

/// Every operator takes an optional context; when present it counts the call
/// and honours the deadline.
Relation apply_filter(const Relation& rel, std::span<const Predicate> preds, ExecContext* ctx = nullptr);
Relation semi_join(const Relation& left, const Relation& right, ExecContext* ctx = nullptr);
Relation natural_join(const Relation& left, const Relation& right, ExecContext* ctx = nullptr);
Relation project(const Relation& rel, std::span<const std::string> attrs, ExecContext* ctx = nullptr);
/// One row per group; output schema is the grouping attributes followed by
/// one column per aggregate. Without grouping an empty input is an error.
Relation group_aggregate(const Relation& rel, std::span<const std::string> grouping,
                         std::span<const AggregateSpec> aggs, ExecContext* ctx = nullptr);

/// Attributes present in both schemas, in the order of the left schema.
std::vector<std::string> shared_attributes(const Relation& left, const Relation& right);

}  // namespace smash
