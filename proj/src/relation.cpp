#include "smash/relation.hpp"

#include <algorithm>
#include <set>

#include "smash/error.hpp"

namespace smash {

Relation::Relation(std::string name_, std::vector<std::string> schema_, std::vector<ColumnType> types_,
                   std::vector<Tuple> rows_)
    : name(std::move(name_)), schema(std::move(schema_)), types(std::move(types_)), rows(std::move(rows_)) {}

std::optional<std::size_t> Relation::index_of(const std::string& attribute) const {
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (schema[i] == attribute) return i;
  return std::nullopt;
}

std::size_t Relation::require_index(const std::string& attribute) const {
  if (auto idx = index_of(attribute)) return *idx;
  throw Error(ErrorCode::UnknownAttribute, "relation '" + name + "' has no attribute '" + attribute + "'");
}

void Relation::validate() const {
  std::set<std::string> seen;
  for (const auto& a : schema)
    if (!seen.insert(a).second) throw Error(ErrorCode::UnknownAttribute, "duplicate attribute '" + a + "' in " + name);
  if (types.size() != schema.size()) throw Error(ErrorCode::TypeMismatch, "type list arity mismatch in " + name);
  for (const auto& row : rows)
    if (row.size() != schema.size()) throw Error(ErrorCode::TypeMismatch, "tuple arity mismatch in " + name);
}

Relation make_int_relation(std::string name, std::vector<std::string> schema,
                           const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<ColumnType> types(schema.size(), ColumnType::Int);
  Relation rel(std::move(name), std::move(schema), std::move(types));
  rel.rows.reserve(rows.size());
  for (const auto& r : rows) rel.rows.emplace_back(r.begin(), r.end());
  rel.validate();
  return rel;
}

std::vector<Tuple> canonical_rows(const Relation& rel) {
  std::vector<Tuple> rows = rel.rows;
  std::sort(rows.begin(), rows.end(), tuple_total_less);
  return rows;
}

bool multiset_equal(const Relation& a, const Relation& b) {
  if (a.size() != b.size() || a.arity() != b.arity()) return false;
  const auto ra = canonical_rows(a);
  const auto rb = canonical_rows(b);
  for (std::size_t i = 0; i < ra.size(); ++i)
    if (tuple_total_less(ra[i], rb[i]) || tuple_total_less(rb[i], ra[i])) return false;
  return true;
}

void Database::add(Relation rel) {
  rel.validate();
  auto name = rel.name;
  tables.insert_or_assign(std::move(name), std::move(rel));
}

const Relation& Database::get(const std::string& name) const {
  auto it = tables.find(name);
  if (it == tables.end()) throw Error(ErrorCode::UnknownTable, "unknown table '" + name + "'");
  return it->second;
}

Catalog Database::catalog() const {
  Catalog out;
  for (const auto& [name, rel] : tables) out[name] = rel.schema;
  return out;
}

void ExecContext::check_deadline() const {
  if (deadline != std::chrono::steady_clock::time_point::max() && std::chrono::steady_clock::now() > deadline)
    throw Error(ErrorCode::Timeout, "evaluation exceeded its deadline");
}

}  // namespace smash
