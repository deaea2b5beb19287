#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smash/estimator.hpp"
#include "smash/features.hpp"
#include "smash/ml/cart.hpp"
#include "smash/ml/dataset.hpp"
#include "smash/query.hpp"

namespace smash {

enum class Strategy { Base, Rewriting };
const char* to_string(Strategy s);

struct HarnessConfig {
  std::size_t repeats = 5;
  double timeout_s = 100.0;
  std::uint64_t seed = 42;
};

struct RunEntry {
  std::string query_id;
  Strategy strategy = Strategy::Base;
  double warmup_s = 0.0;
  std::vector<double> rep_times_s;
  /// Mean of rep_times_s, or timeout_s when timed out.
  double mean_s = 0.0;
  bool timed_out = false;
  /// Result size and order-independent checksum of the warm-up run.
  std::size_t result_rows = 0;
  std::string result_checksum;
  std::string error;
};

struct SkippedQuery {
  std::string query_id;
  std::string reason;
};

struct RunLog {
  HarnessConfig config;
  std::vector<RunEntry> entries;
  std::vector<SkippedQuery> skipped;

  const RunEntry* find(const std::string& id, Strategy s) const;
  /// Ids with at least one entry, in first-appearance order.
  std::vector<std::string> query_ids() const;
  /// Both strategies timed out.
  bool excluded(const std::string& id) const;

  nlohmann::ordered_json to_json(bool with_timing = true) const;
  static RunLog from_json(const nlohmann::json& j);
};

/// Order-independent digest of a relation's rows.
std::string result_checksum(const Relation& rel);

/// Times one strategy: a discarded warm-up run, then `repeats` timed runs,
/// each under a cooperative deadline of `timeout_s`.
RunEntry run_strategy(const std::string& id, const QuerySpec& q, const Database& db, Strategy s,
                      const HarnessConfig& config);

/// Runs every query under both strategies, sequentially and single-threaded.
/// Cyclic or otherwise unusable queries are listed as skipped.
RunLog run_workload(const Database& db, const std::vector<std::string>& ids, const std::vector<QuerySpec>& queries,
                    const HarnessConfig& config);

/// One example per query with both strategies; queries where both timed
/// out, failed or have no features are left out. Throws MissingStrategy
/// when a query has only one strategy.
std::vector<ml::LabeledExample> build_dataset(const RunLog& log, const std::map<std::string, FeatureVector>& features);

struct StrategyTotals {
  double total_seconds = 0.0;
  double oma_seconds = 0.0;
  double enum_seconds = 0.0;
  /// Queries where this strategy's time exceeds Base's.
  std::size_t slowdowns = 0;
  double slowdown_fraction = 0.0;
};

struct QueryOutcome {
  std::string query_id;
  bool is_0ma = false;
  double base_s = 0.0;
  double rewriting_s = 0.0;
  std::string chosen;
  double decision_s = 0.0;
  double smash_s = 0.0;
};

struct E2eReport {
  std::map<std::string, StrategyTotals> strategies;  // Base, Rewriting, SMASH, OracleBest
  std::vector<QueryOutcome> queries;
  std::vector<std::string> excluded_query_ids;
  double threshold = 0.0;
  double mean_decision_s = 0.0;
  double max_decision_s = 0.0;
  double clock_resolution_s = 0.0;

  nlohmann::ordered_json to_json() const;
  /// Base / Rewriting / SMASH / OracleBest split by 0MA and enumeration.
  std::string text() const;
};

/// Per query: extract features, decide, and charge the chosen strategy's
/// measured mean plus the measured decision latency.
E2eReport smash_e2e(const Database& db, const std::vector<std::string>& ids, const std::vector<QuerySpec>& queries,
                    const ml::CartModel& model, double threshold, const RunLog& log, const StatsCatalog& stats);

}  // namespace smash
