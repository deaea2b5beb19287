#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "smash/acyclic.hpp"
#include "smash/estimator.hpp"
#include "smash/normalize.hpp"

namespace smash {

/// Fixed-length summary of a variable-length set of numbers.
struct SixStats {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  double mean = 0.0;

  std::array<double, 6> values() const { return {min, q25, median, q75, max, mean}; }
  static const std::array<const char*, 6>& names();
  friend bool operator==(const SixStats&, const SixStats&) = default;
};

/// Quantiles interpolate linearly between sorted values at q*(n-1).
/// Throws EmptySet.
SixStats reduce_set(std::span<const double> values);

inline constexpr std::size_t kFeatureCount = 31;

struct FeatureVector {
  double is_0ma = 0.0;
  double n_relations = 0.0;
  double n_conditions = 0.0;
  double n_filters = 0.0;
  double n_joins = 0.0;
  double depth = 0.0;
  SixStats container_counts;
  SixStats branching_degrees;  // all zero when the tree has no inner node
  double est_total_cost = 0.0;
  SixStats est_single_table_rows;
  SixStats est_join_rows;  // all zero for single-atom queries

  /// Flattened in serialization order.
  std::vector<double> values() const;
  static const std::vector<std::string>& names();
  static FeatureVector from_values(std::span<const double> values);
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const NormalizedCQ& cq, const JoinTree& tree, const EstimateSet& est);

/// Join tree, estimates and features of one query.
FeatureVector features_for(const NormalizedCQ& cq, const Database& db, const StatsCatalog& stats);

/// Normalizes against the full catalog first, as training and selection
/// both do.
FeatureVector features_for(const QuerySpec& q, const Database& db, const Catalog& catalog, const StatsCatalog& stats);

/// Batch extraction; the parallel version splits queries over OpenMP
/// threads and returns the same vectors in the same order.
std::vector<FeatureVector> extract_batch_serial(std::span<const NormalizedCQ> queries, const Database& db,
                                                const StatsCatalog& stats);
std::vector<FeatureVector> extract_batch_parallel(std::span<const NormalizedCQ> queries, const Database& db,
                                                  const StatsCatalog& stats);

nlohmann::ordered_json features_json(const FeatureVector& f);
std::string features_csv_header();
std::string features_csv_row(const FeatureVector& f);

/// Shortest text that parses back to the same double.
std::string format_number(double v);

}  // namespace smash
