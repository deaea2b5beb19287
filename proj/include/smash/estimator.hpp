#pragma once

#include <map>
#include <string>
#include <vector>

#include "smash/normalize.hpp"
#include "smash/relation.hpp"

namespace smash {

/// Per-table statistics gathered once per database, the stand-in for a
/// DBMS catalog refreshed by ANALYZE.
struct TableStats {
  std::size_t rows = 0;
  std::map<std::string, std::size_t> distinct;  // attribute -> number of distinct values
};

struct StatsCatalog {
  std::map<std::string, TableStats> tables;

  static StatsCatalog analyze(const Database& db);
};

struct EstimateSet {
  /// Exact row count of each atom after its filters, FROM order.
  std::vector<double> single_table_rows;
  /// Estimated output rows of each join of the left-deep FROM-order plan.
  std::vector<double> join_rows;
  /// Sum of all join estimates plus all post-filter counts.
  double total_cost = 0.0;
};

/// Join estimates use |A join B| = |A||B| / prod_x max(ndv_A(x), ndv_B(x))
/// over shared classes x. Post-filter distinct counts are taken as
/// min(table ndv, post-filter rows). Without a catalog the needed
/// statistics are computed on the fly.
EstimateSet estimate_cardinalities(const NormalizedCQ& cq, const Database& db, const StatsCatalog* stats = nullptr);

/// Rows of the atom's table satisfying its filters, without materializing.
std::size_t count_filtered_rows(const Atom& atom, const Database& db);

}  // namespace smash
