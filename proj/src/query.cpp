#include "smash/query.hpp"

#include <set>
#include <sstream>

#include "smash/error.hpp"
#include "smash/sql.hpp"

namespace smash {
namespace {

[[noreturn]] void undeclared(const sql::ColumnRef& c) {
  throw ParseError("alias '" + c.qualifier + "' is not declared in FROM", c.line, c.column);
}

AttrRef resolve(const sql::ColumnRef& c, const QuerySpec& q) {
  if (c.qualifier.empty()) {
    if (q.tables.size() != 1)
      throw ParseError("column '" + c.name + "' must be qualified with an alias", c.line, c.column);
    return {q.tables.front().alias, c.name};
  }
  if (q.find_alias(c.qualifier) == nullptr) undeclared(c);
  return {c.qualifier, c.name};
}

}  // namespace

bool QuerySpec::is_aggregate() const {
  for (const auto& s : select)
    if (s.aggregate) return true;
  return false;
}

const TableEntry* QuerySpec::find_alias(const std::string& alias) const {
  for (const auto& t : tables)
    if (t.alias == alias) return &t;
  return nullptr;
}

QuerySpec parse_query(std::string_view text) {
  const auto st = sql::parse_statement(text);
  if (st.kind != sql::Statement::Kind::Select)
    throw Error(ErrorCode::UnsupportedConstruct, "only SELECT queries are accepted as input");
  const auto& s = st.select;
  QuerySpec q;
  std::set<std::string> aliases;
  for (const auto& t : s.from) {
    if (!aliases.insert(t.alias).second) throw Error(ErrorCode::ParseError, "duplicate alias '" + t.alias + "'");
    q.tables.push_back({t.table, t.alias});
  }
  for (const auto& item : s.items) {
    SelectEntry e;
    switch (item.kind) {
      case sql::SelectItem::Kind::Star:
        throw Error(ErrorCode::UnsupportedConstruct, "SELECT * is not accepted as query input");
      case sql::SelectItem::Kind::Constant:
        throw Error(ErrorCode::UnsupportedConstruct, "constant select items are not supported");
      case sql::SelectItem::Kind::Column: e.ref = resolve(item.column, q); break;
      case sql::SelectItem::Kind::Aggregate:
        e.aggregate = true;
        e.fn = item.fn;
        e.distinct = item.distinct;
        if (!item.count_star) e.ref = resolve(item.column, q);
        break;
    }
    q.select.push_back(std::move(e));
  }
  for (const auto& conj : s.where) {
    if (std::holds_alternative<sql::Exists>(conj))
      throw Error(ErrorCode::UnsupportedConstruct, "EXISTS subqueries are not accepted as query input");
    const auto& c = std::get<sql::Comparison>(conj);
    if (!c.lhs.cast_type.empty() || !c.rhs.cast_type.empty())
      throw Error(ErrorCode::UnsupportedConstruct, "CAST is not accepted as query input");
    const bool lcol = c.lhs.kind == sql::Operand::Kind::Column;
    const bool rcol = c.rhs.kind == sql::Operand::Kind::Column;
    if (lcol && rcol) {
      if (c.op != CompareOp::Eq)
        throw Error(ErrorCode::UnsupportedConstruct, "only equality is supported between two columns");
      JoinCondition jc{resolve(c.lhs.column, q), resolve(c.rhs.column, q)};
      if (jc.left == jc.right) continue;  // trivially true
      q.join_conds.push_back(std::move(jc));
    } else if (lcol) {
      q.filters.push_back({resolve(c.lhs.column, q), c.op, c.rhs.literal});
    } else if (rcol) {
      q.filters.push_back({resolve(c.rhs.column, q), flip(c.op), c.lhs.literal});
    } else {
      throw Error(ErrorCode::UnsupportedConstruct, "comparison between two literals");
    }
  }
  for (const auto& g : s.group_by) q.group_by.push_back(resolve(g, q));
  if (q.is_aggregate()) {
    for (const auto& e : q.select) {
      if (e.aggregate) continue;
      bool grouped = false;
      for (const auto& g : q.group_by) grouped = grouped || g == *e.ref;
      if (!grouped)
        throw Error(ErrorCode::UnsupportedConstruct, "column " + e.ref->str() + " must appear in GROUP BY");
    }
  } else if (!q.group_by.empty()) {
    throw Error(ErrorCode::UnsupportedConstruct, "GROUP BY without aggregates");
  }
  return q;
}

std::string to_sql(const QuerySpec& q) {
  std::ostringstream out;
  out << "SELECT ";
  for (std::size_t i = 0; i < q.select.size(); ++i) {
    const auto& e = q.select[i];
    if (i) out << ", ";
    if (e.aggregate) {
      out << to_sql(e.fn) << '(' << (e.distinct ? "DISTINCT " : "") << (e.ref ? e.ref->str() : "*") << ')';
    } else {
      out << e.ref->str();
    }
  }
  out << "\nFROM ";
  for (std::size_t i = 0; i < q.tables.size(); ++i)
    out << (i ? ", " : "") << q.tables[i].table << " AS " << q.tables[i].alias;
  std::vector<std::string> conds;
  for (const auto& j : q.join_conds) conds.push_back(j.left.str() + " = " + j.right.str());
  for (const auto& f : q.filters) conds.push_back(f.ref.str() + " " + to_sql(f.op) + " " + to_sql_literal(f.literal));
  if (!conds.empty()) {
    out << "\nWHERE ";
    for (std::size_t i = 0; i < conds.size(); ++i) out << (i ? "\n  AND " : "") << conds[i];
  }
  if (!q.group_by.empty()) {
    out << "\nGROUP BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) out << (i ? ", " : "") << q.group_by[i].str();
  }
  out << ';';
  return out.str();
}

}  // namespace smash
