#include "smash/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <numeric>

#include "smash/error.hpp"

namespace smash {
namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SixStats stats_or_zero(const std::vector<double>& v) { return v.empty() ? SixStats{} : reduce_set(v); }

void append(std::vector<double>& out, const SixStats& s) {
  for (double v : s.values()) out.push_back(v);
}

SixStats take(std::span<const double> v, std::size_t& i) {
  SixStats s{v[i], v[i + 1], v[i + 2], v[i + 3], v[i + 4], v[i + 5]};
  i += 6;
  return s;
}

}  // namespace

const std::array<const char*, 6>& SixStats::names() {
  static const std::array<const char*, 6> n{"min", "q25", "median", "q75", "max", "mean"};
  return n;
}

SixStats reduce_set(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySet, "cannot summarize an empty set");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  SixStats s;
  s.min = v.front();
  s.q25 = quantile(v, 0.25);
  s.median = quantile(v, 0.5);
  s.q75 = quantile(v, 0.75);
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  // Rounding in the sum can push the mean just outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::vector<double> FeatureVector::values() const {
  std::vector<double> out{is_0ma, n_relations, n_conditions, n_filters, n_joins, depth};
  out.reserve(kFeatureCount);
  append(out, container_counts);
  append(out, branching_degrees);
  out.push_back(est_total_cost);
  append(out, est_single_table_rows);
  append(out, est_join_rows);
  return out;
}

const std::vector<std::string>& FeatureVector::names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> out{"B1_is_0ma", "B2_relations", "B3_conditions", "B4_filters", "B5_joins", "B6_depth"};
    auto add = [&](const std::string& prefix) {
      for (const char* s : SixStats::names()) out.push_back(prefix + "_" + s);
    };
    add("B7_container_counts");
    add("B8_branching_degrees");
    out.push_back("P1_est_total_cost");
    add("P2_est_single_table_rows");
    add("P3_est_join_rows");
    return out;
  }();
  return n;
}

FeatureVector FeatureVector::from_values(std::span<const double> v) {
  if (v.size() != kFeatureCount)
    throw Error(ErrorCode::UnseenFeatureDimension,
                "expected " + std::to_string(kFeatureCount) + " features, got " + std::to_string(v.size()));
  FeatureVector f;
  f.is_0ma = v[0];
  f.n_relations = v[1];
  f.n_conditions = v[2];
  f.n_filters = v[3];
  f.n_joins = v[4];
  f.depth = v[5];
  std::size_t i = 6;
  f.container_counts = take(v, i);
  f.branching_degrees = take(v, i);
  f.est_total_cost = v[i++];
  f.est_single_table_rows = take(v, i);
  f.est_join_rows = take(v, i);
  return f;
}

FeatureVector extract_features(const NormalizedCQ& cq, const JoinTree& tree, const EstimateSet& est) {
  FeatureVector f;
  f.is_0ma = tree.oma ? 1.0 : 0.0;
  f.n_relations = static_cast<double>(cq.atoms.size());
  f.n_filters = static_cast<double>(cq.filter_count());
  f.n_joins = static_cast<double>(cq.join_count());
  f.n_conditions = f.n_filters + f.n_joins;
  f.depth = static_cast<double>(tree.depth());

  std::vector<double> containers;
  for (ClassId c = 0; c < static_cast<ClassId>(cq.class_count()); ++c)
    containers.push_back(static_cast<double>(cq.atoms_with(c).size()));
  f.container_counts = stats_or_zero(containers);

  std::vector<double> branching;
  for (std::size_t n = 0; n < tree.size(); ++n)
    if (!tree.is_leaf(n)) branching.push_back(static_cast<double>(tree.children[n].size()));
  f.branching_degrees = stats_or_zero(branching);

  f.est_total_cost = est.total_cost;
  f.est_single_table_rows = stats_or_zero(est.single_table_rows);
  f.est_join_rows = stats_or_zero(est.join_rows);
  return f;
}

FeatureVector features_for(const NormalizedCQ& cq, const Database& db, const StatsCatalog& stats) {
  return extract_features(cq, make_reduction_tree(cq), estimate_cardinalities(cq, db, &stats));
}

FeatureVector features_for(const QuerySpec& q, const Database& db, const Catalog& catalog, const StatsCatalog& stats) {
  return features_for(normalize(q, &catalog), db, stats);
}

std::vector<FeatureVector> extract_batch_serial(std::span<const NormalizedCQ> queries, const Database& db,
                                                const StatsCatalog& stats) {
  std::vector<FeatureVector> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(features_for(q, db, stats));
  return out;
}

std::vector<FeatureVector> extract_batch_parallel(std::span<const NormalizedCQ> queries, const Database& db,
                                                  const StatsCatalog& stats) {
  std::vector<FeatureVector> out(queries.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = features_for(queries[static_cast<std::size_t>(i)], db, stats);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

nlohmann::ordered_json features_json(const FeatureVector& f) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  const auto vals = f.values();
  const auto& names = FeatureVector::names();
  for (std::size_t i = 0; i < vals.size(); ++i) j[names[i]] = vals[i];
  return j;
}

std::string features_csv_header() {
  std::string out;
  for (const auto& n : FeatureVector::names()) out += (out.empty() ? "" : ",") + n;
  return out;
}

std::string features_csv_row(const FeatureVector& f) {
  std::string out;
  bool first = true;
  for (double v : f.values()) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  return out;
}

}  // namespace smash
