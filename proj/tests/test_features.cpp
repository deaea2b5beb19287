#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "smash/acyclic.hpp"
#include "smash/augmentation.hpp"
#include "smash/error.hpp"
#include "smash/features.hpp"
#include "smash/random.hpp"

using namespace smash;

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

void expect_printed(const SixStats& s, double min, double q25, double median, double q75, double max, double mean) {
  EXPECT_EQ(round2(s.min), min);
  EXPECT_EQ(round2(s.q25), q25);
  EXPECT_EQ(round2(s.median), median);
  EXPECT_EQ(round2(s.q75), q75);
  EXPECT_EQ(round2(s.max), max);
  EXPECT_EQ(round2(s.mean), mean);
}

const char* kQ1 =
    "SELECT MIN(c.nid) FROM compound c, binds b, gene g, associates a, disease d "
    "WHERE c.nid = b.sid AND b.tid = g.nid AND g.nid = a.tid AND a.sid = d.nid";
const char* kQ2 =
    "SELECT MIN(c1.nid) FROM compound c1, downregulates d1, gene g, upregulates u2, compound c2, treats t, disease d "
    "WHERE c1.nid = d1.sid AND d1.tid = g.nid AND g.nid = u2.tid AND u2.sid = c2.nid AND c2.nid = t.sid AND t.tid = d.nid";

Database hetio_toy() {
  Database db;
  db.add(make_int_relation("compound", {"nid"}, {{1}, {2}, {3}}));
  db.add(make_int_relation("gene", {"nid"}, {{10}, {11}}));
  db.add(make_int_relation("disease", {"nid"}, {{20}, {21}}));
  for (const char* edge : {"binds", "associates", "downregulates", "upregulates", "treats"})
    db.add(make_int_relation(edge, {"sid", "tid"}, {{1, 10}, {2, 11}, {20, 10}}));
  return db;
}

FeatureVector features_of(const char* sql, const Database& db) {
  return features_for(parse_query(sql), db, db.catalog(), StatsCatalog::analyze(db));
}

}  // namespace

TEST(ReduceSet, BioQ1Rows) {
  const std::vector<double> containers{1, 1, 1, 1, 1, 2, 3};
  expect_printed(reduce_set(containers), 1, 1, 1, 1.5, 3, 1.43);
  const std::vector<double> branching{3, 1};
  expect_printed(reduce_set(branching), 1, 1.5, 2, 2.5, 3, 2);
  const std::vector<double> single_rows{23142, 25246, 137, 1, 1552};
  expect_printed(reduce_set(single_rows), 1, 137, 1552, 23142, 25246, 10015.6);
  const std::vector<double> join_rows{1190, 2361, 626, 626};
  expect_printed(reduce_set(join_rows), 626, 626, 908, 1482.75, 2361, 1200.75);
}

TEST(ReduceSet, BioQ2Rows) {
  const std::vector<double> containers{1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 3};
  expect_printed(reduce_set(containers), 1, 1, 1, 1, 3, 1.27);
  const std::vector<double> branching{2, 3, 1};
  expect_printed(reduce_set(branching), 1, 1.5, 2, 2.5, 3, 2);
  const std::vector<double> single_rows{154076, 1552, 146276, 1510, 137, 1552, 20945};
  expect_printed(reduce_set(single_rows), 137, 1531, 1552, 83610.5, 154076, 46578.29);
  const std::vector<double> join_rows{493338, 22993, 2578, 2578, 446, 446};
  expect_printed(reduce_set(join_rows), 446, 979, 2578, 17889.25, 493338, 87063.17);
}

TEST(ReduceSet, SingletonAndEmpty) {
  const std::vector<double> five{5};
  EXPECT_EQ(reduce_set(five), (SixStats{5, 5, 5, 5, 5, 5}));
  try {
    reduce_set(std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySet);
  }
}

TEST(ReduceSet, OrderingInvariant) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> v(1 + uniform_index(rng, 40));
    for (auto& x : v) x = uniform01(rng) < 0.3 ? 0.1 : uniform01(rng) * 1e6 - 1e3;
    const auto s = reduce_set(v);
    EXPECT_LE(s.min, s.q25);
    EXPECT_LE(s.q25, s.median);
    EXPECT_LE(s.median, s.q75);
    EXPECT_LE(s.q75, s.max);
    EXPECT_GE(s.mean, s.min);
    EXPECT_LE(s.mean, s.max);
  }
}

TEST(Features, BioQ1) {
  const auto f = features_of(kQ1, hetio_toy());
  EXPECT_EQ(f.is_0ma, 1);
  EXPECT_EQ(f.n_relations, 5);
  EXPECT_EQ(f.n_conditions, 4);
  EXPECT_EQ(f.n_filters, 0);
  EXPECT_EQ(f.n_joins, 4);
  EXPECT_EQ(f.depth, 2);
  expect_printed(f.branching_degrees, 1, 1.5, 2, 2.5, 3, 2);
}

TEST(Features, BioQ2) {
  const auto f = features_of(kQ2, hetio_toy());
  EXPECT_EQ(f.is_0ma, 1);
  EXPECT_EQ(f.n_relations, 7);
  EXPECT_EQ(f.n_conditions, 6);
  EXPECT_EQ(f.n_filters, 0);
  EXPECT_EQ(f.n_joins, 6);
  expect_printed(f.branching_degrees, 1, 1.5, 2, 2.5, 3, 2);
  // The reduction leaves u2 as root with children t, d1, g; t holds d and
  // c2, d1 holds c1. Depth is 2 here.
  EXPECT_EQ(f.depth, 2);
}

// Chain R(a,b)-S(b,c)-T(c,d): the reduction absorbs R and T into S.
TEST(Features, ChainFixture) {
  const auto db = smash::testing::chain_db();
  const auto f = features_of(smash::testing::kChainMin, db);
  EXPECT_EQ(f.is_0ma, 1);
  EXPECT_EQ(f.n_relations, 3);
  EXPECT_EQ(f.n_filters, 0);
  EXPECT_EQ(f.n_joins, 2);
  EXPECT_EQ(f.n_conditions, 2);
  EXPECT_EQ(f.depth, 1);
  const std::vector<double> containers{2, 2, 1, 1};
  EXPECT_EQ(f.container_counts, reduce_set(containers));
  EXPECT_EQ(f.branching_degrees, (SixStats{2, 2, 2, 2, 2, 2}));
  // Estimates: rows 3,3,2; R join S = 3*3/max(3,2) = 3, then with T on c:
  // 3*2/max(min(3,3), 2) = 2.
  EXPECT_EQ(f.est_single_table_rows, reduce_set(std::vector<double>{3, 3, 2}));
  EXPECT_EQ(f.est_join_rows, reduce_set(std::vector<double>{3, 2}));
  EXPECT_DOUBLE_EQ(f.est_total_cost, 3 + 3 + 2 + 3 + 2);
}

TEST(Features, SingleAtom) {
  const auto db = smash::testing::chain_db();
  const auto f = features_of("SELECT R.a FROM R AS R WHERE R.a > 1", db);
  EXPECT_EQ(f.is_0ma, 0);
  EXPECT_EQ(f.n_relations, 1);
  EXPECT_EQ(f.n_joins, 0);
  EXPECT_EQ(f.n_filters, 1);
  EXPECT_EQ(f.depth, 0);
  EXPECT_EQ(f.container_counts, (SixStats{1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(f.branching_degrees, SixStats{});
  EXPECT_EQ(f.est_join_rows, SixStats{});
  EXPECT_EQ(f.est_single_table_rows, (SixStats{2, 2, 2, 2, 2, 2}));
}

TEST(Features, EstimatesAreCopied) {
  const auto db = smash::testing::chain_db();
  const auto cq = normalize(parse_query(smash::testing::kChainEnum));
  EstimateSet est;
  est.single_table_rows = {7, 8, 9};
  est.join_rows = {1, 100};
  est.total_cost = 125;
  const auto f = extract_features(cq, make_reduction_tree(cq), est);
  EXPECT_EQ(f.est_total_cost, 125);
  EXPECT_EQ(f.est_single_table_rows, reduce_set(est.single_table_rows));
  EXPECT_EQ(f.est_join_rows, reduce_set(est.join_rows));
}

TEST(FeatureVector, LayoutAndRoundTrip) {
  const auto& names = FeatureVector::names();
  ASSERT_EQ(names.size(), kFeatureCount);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), kFeatureCount);
  EXPECT_EQ(names[0], "B1_is_0ma");
  EXPECT_EQ(names[5], "B6_depth");
  EXPECT_EQ(names[18], "P1_est_total_cost");
  const auto f = features_of(smash::testing::kChainMin, smash::testing::chain_db());
  EXPECT_EQ(f.values().size(), kFeatureCount);
  EXPECT_EQ(FeatureVector::from_values(f.values()), f);
  try {
    FeatureVector::from_values(std::vector<double>(30, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnseenFeatureDimension);
  }
}

TEST(FeatureVector, Serializations) {
  const auto f = features_of(smash::testing::kChainMin, smash::testing::chain_db());
  const auto j = features_json(f);
  std::size_t i = 0;
  for (const auto& [key, value] : j.items()) EXPECT_EQ(key, FeatureVector::names()[i++]);
  EXPECT_EQ(i, kFeatureCount);
  const auto header = features_csv_header();
  const auto row = features_csv_row(f);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 30);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 30);
  EXPECT_EQ(features_csv_row(f), features_csv_row(features_of(smash::testing::kChainMin, smash::testing::chain_db())));
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(FeatureBatch, SerialEqualsParallel) {
  WorkloadSpec spec;
  spec.n_base_queries = 60;
  spec.min_rows = 50;
  spec.max_rows = 120;
  const auto w = generate_workload(spec);
  const auto catalog = w.db.catalog();
  std::vector<NormalizedCQ> queries;
  for (const auto& q : w.queries) queries.push_back(normalize(q, &catalog));
  const auto stats = StatsCatalog::analyze(w.db);
  const auto serial = extract_batch_serial(queries, w.db, stats);
  const auto parallel = extract_batch_parallel(queries, w.db, stats);
  ASSERT_EQ(serial.size(), queries.size());
  EXPECT_EQ(serial, parallel);
  for (std::size_t i = 0; i < queries.size(); ++i)
    EXPECT_EQ(serial[i], features_for(w.queries[i], w.db, catalog, stats));
}
