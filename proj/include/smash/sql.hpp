#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smash/operators.hpp"

/// Syntax tree and parser for the SQL subset the tool reads and writes.
/// The grammar is a superset of the user-facing query dialect: it also
/// accepts the CREATE/DROP/EXISTS/CAST forms emitted by the rewriter.
namespace smash::sql {

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string name;
  int line = 0;
  int column = 0;
};

struct Operand {
  enum class Kind { Column, Literal } kind = Kind::Literal;
  ColumnRef column;
  Value literal;
  /// Set when the column is wrapped in CAST(... AS <type>).
  std::string cast_type;
};

struct SelectItem {
  enum class Kind { Star, Column, Aggregate, Constant } kind = Kind::Column;
  ColumnRef column;
  AggFn fn = AggFn::Min;
  bool distinct = false;
  bool count_star = false;
  Value constant;
  std::string alias;
};

struct Comparison {
  Operand lhs;
  CompareOp op = CompareOp::Eq;
  Operand rhs;
};

struct SelectStmt;

struct Exists {
  std::shared_ptr<SelectStmt> subquery;
};

using Conjunct = std::variant<Comparison, Exists>;

struct TableRef {
  std::string table;
  std::string alias;
};

struct SelectStmt {
  std::vector<SelectItem> items;
  std::vector<TableRef> from;
  std::vector<Conjunct> where;
  std::vector<ColumnRef> group_by;
};

struct Statement {
  enum class Kind { Select, CreateView, CreateTable, DropView, DropTable } kind = Kind::Select;
  bool unlogged = false;
  std::string name;
  SelectStmt select;
};

/// Parses one statement (optional trailing semicolon). Throws ParseError
/// for malformed input and UnsupportedConstruct for recognised but
/// unsupported SQL (OR, IN, LIKE, BETWEEN, explicit JOIN, arithmetic, ...).
Statement parse_statement(std::string_view text);

/// Splits a script on top-level semicolons (outside string literals).
std::vector<std::string> split_statements(std::string_view script);

}  // namespace smash::sql
