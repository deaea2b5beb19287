#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smash/operators.hpp"
#include "smash/relation.hpp"

namespace smash {

struct AttrRef {
  std::string alias;
  std::string attribute;

  std::string str() const { return alias + "." + attribute; }
  friend bool operator==(const AttrRef&, const AttrRef&) = default;
  friend auto operator<=>(const AttrRef&, const AttrRef&) = default;
};

struct TableEntry {
  std::string table;
  std::string alias;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct SelectEntry {
  bool aggregate = false;
  AggFn fn = AggFn::Min;
  bool distinct = false;
  /// Empty for COUNT(*).
  std::optional<AttrRef> ref;
  friend bool operator==(const SelectEntry&, const SelectEntry&) = default;
};

struct JoinCondition {
  AttrRef left;
  AttrRef right;
  friend bool operator==(const JoinCondition&, const JoinCondition&) = default;
};

struct FilterCondition {
  AttrRef ref;
  CompareOp op = CompareOp::Eq;
  Value literal;
  friend bool operator==(const FilterCondition&, const FilterCondition&) = default;
};

/// Structured form of one SELECT-FROM-WHERE query in the supported dialect.
struct QuerySpec {
  std::vector<TableEntry> tables;
  std::vector<SelectEntry> select;
  std::vector<AttrRef> group_by;
  std::vector<JoinCondition> join_conds;
  std::vector<FilterCondition> filters;

  bool is_aggregate() const;
  const TableEntry* find_alias(const std::string& alias) const;
  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// Throws ParseError (with position) or UnsupportedConstruct.
QuerySpec parse_query(std::string_view sql);

/// Renders the spec back to the dialect; parse_query(to_sql(q)) == q.
std::string to_sql(const QuerySpec& q);

}  // namespace smash
