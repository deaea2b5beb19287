#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smash/value.hpp"

namespace smash {

/// Named schema plus a multiset of tuples (bag semantics).
struct Relation {
  std::string name;
  std::vector<std::string> schema;
  std::vector<ColumnType> types;
  std::vector<Tuple> rows;

  Relation() = default;
  Relation(std::string name, std::vector<std::string> schema, std::vector<ColumnType> types,
           std::vector<Tuple> rows = {});

  std::size_t arity() const { return schema.size(); }
  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  std::optional<std::size_t> index_of(const std::string& attribute) const;
  /// Throws UnknownAttribute.
  std::size_t require_index(const std::string& attribute) const;

  /// Checks arity and name-uniqueness invariants; throws on violation.
  void validate() const;
};

/// Builds an all-int relation; handy in tests and fixtures.
Relation make_int_relation(std::string name, std::vector<std::string> schema,
                           const std::vector<std::vector<std::int64_t>>& rows);

/// Rows sorted under the total value order; two relations are equal as
/// multisets iff their canonical rows are equal.
std::vector<Tuple> canonical_rows(const Relation& rel);
bool multiset_equal(const Relation& a, const Relation& b);

/// Table name to attribute list, used where only the schema is needed.
using Catalog = std::map<std::string, std::vector<std::string>>;

struct Database {
  std::map<std::string, Relation> tables;

  void add(Relation rel);
  bool contains(const std::string& name) const { return tables.count(name) != 0; }
  /// Throws UnknownTable.
  const Relation& get(const std::string& name) const;
  Catalog catalog() const;
};

struct OpCounter {
  std::uint64_t joins = 0;
  std::uint64_t semijoins = 0;
  std::uint64_t filters = 0;
  std::uint64_t aggregates = 0;
  /// Sum of output sizes of every join and semi-join.
  std::uint64_t tuples_materialized = 0;
};

/// Per-evaluation state: operator counts and an optional deadline that
/// long-running operators poll.
struct ExecContext {
  OpCounter counter;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();

  /// Throws Timeout once the deadline has passed.
  void check_deadline() const;
};

}  // namespace smash
