#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smash/query.hpp"
#include "smash/relation.hpp"

namespace smash {

/// Filter variants: the query itself, plus one variant with a changed
/// literal for a single filter, or a larger-result and a smaller-result
/// variant when there are two or more filters.
std::vector<QuerySpec> augment_filters(const QuerySpec& q, const Database& db);

/// One MIN(alias.first_column) variant per table, FROM order. Throws
/// NotAggregate for enumeration queries.
std::vector<QuerySpec> augment_aggregate_attribute(const QuerySpec& q, const Catalog& catalog);

/// Enumeration variants selecting pairs of join attributes: three distinct
/// random pairs with at least three join attributes, otherwise one variant
/// selecting all of them. Throws NoJoins.
std::vector<QuerySpec> augment_enumeration(const QuerySpec& q, std::uint64_t seed);

struct WorkloadSpec {
  std::uint64_t seed = 42;
  std::size_t n_base_queries = 200;
  std::size_t min_relations = 2;
  std::size_t max_relations = 4;
  std::size_t min_rows = 1000;
  std::size_t max_rows = 2000;
  /// Tables per pool.
  std::size_t tables_per_pool = 6;
  /// Probability that an atom gets a range filter on its payload column.
  double filter_probability = 0.3;
  /// Range of the fraction of rows a filter keeps.
  double min_selectivity = 0.3;
  double max_selectivity = 0.9;
  /// Fraction of rows in the fan-out pool whose join keys match nothing.
  double dangling_fraction = 0.3;
  /// Average number of partners per join key in the fan-out pool.
  std::size_t fanout = 8;
  /// Fraction of queries drawn as MIN queries over the fan-out pool; the
  /// rest enumerate or count over the one-to-one pool.
  double regime_mix = 0.5;

  /// Throws UnsupportedConstruct for empty ranges or knobs out of [0, 1].
  void validate() const;
};

struct Workload {
  Database db;
  std::vector<std::string> ids;
  std::vector<QuerySpec> queries;
};

/// Tree-shaped (hence acyclic) join queries over two generated table pools:
/// "fan_*" tables with low-cardinality join keys and dangling rows, and
/// "one_*" tables whose join keys are permutations.
Workload generate_workload(const WorkloadSpec& spec);

}  // namespace smash
