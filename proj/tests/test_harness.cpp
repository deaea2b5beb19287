#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "smash/augmentation.hpp"
#include "smash/error.hpp"
#include "smash/harness.hpp"

using namespace smash;
using namespace smash::testing;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

RunEntry entry(const std::string& id, Strategy s, double mean, bool timed_out = false) {
  RunEntry e;
  e.query_id = id;
  e.strategy = s;
  e.mean_s = mean;
  e.rep_times_s = {mean};
  e.timed_out = timed_out;
  return e;
}

// Leaf 0 everywhere, or a split on is_0ma sending 0MA queries to class 1.
ml::CartModel stub_model(bool split_on_oma, double leaf = 0.0) {
  ml::CartModel m;
  m.task = ml::Task::Classify;
  m.feature_names = FeatureVector::names();
  m.importances.assign(kFeatureCount, 0.0);
  if (!split_on_oma) {
    m.nodes.push_back(ml::CartNode{});
    m.nodes[0].value = leaf;
    return m;
  }
  m.nodes.resize(3);
  m.nodes[0].feature = 0;
  m.nodes[0].threshold = 0.5;
  m.nodes[0].left = 1;
  m.nodes[0].right = 2;
  m.nodes[1].value = 0.0;
  m.nodes[2].value = 1.0;
  m.importances[0] = 1.0;
  return m;
}

struct Fabricated {
  Workload w;
  RunLog log;
  StatsCatalog stats;
  std::vector<bool> oma;
};

// Real queries, made-up times: Rewriting halves 0MA queries and doubles
// the rest.
Fabricated fabricated(std::size_t n) {
  WorkloadSpec s;
  s.n_base_queries = n;
  s.min_rows = 30;
  s.max_rows = 60;
  s.fanout = 3;
  Fabricated f{generate_workload(s), {}, {}, {}};
  f.stats = StatsCatalog::analyze(f.w.db);
  const auto catalog = f.w.db.catalog();
  for (std::size_t i = 0; i < n; ++i) {
    const bool oma = make_reduction_tree(normalize(f.w.queries[i], &catalog)).oma;
    f.oma.push_back(oma);
    const double base = 1.0 + static_cast<double>(i % 7) * 0.1;
    f.log.entries.push_back(entry(f.w.ids[i], Strategy::Base, base));
    f.log.entries.push_back(entry(f.w.ids[i], Strategy::Rewriting, oma ? base / 2 : base * 2));
  }
  return f;
}

double chosen_total(const E2eReport& r) {
  double s = 0.0;
  for (const auto& q : r.queries) s += q.smash_s - q.decision_s;
  return s;
}

}  // namespace

TEST(RunStrategy, MeansAndChecksums) {
  const auto db = stats_toy_db();
  const auto q = parse_query(kVotesBadgesUsers);
  HarnessConfig cfg;
  cfg.repeats = 3;
  const auto b = run_strategy("q1", q, db, Strategy::Base, cfg);
  const auto r = run_strategy("q1", q, db, Strategy::Rewriting, cfg);
  for (const auto* e : {&b, &r}) {
    EXPECT_FALSE(e->timed_out);
    EXPECT_TRUE(e->error.empty()) << e->error;
    ASSERT_EQ(e->rep_times_s.size(), 3u);
    EXPECT_NEAR(e->mean_s, std::accumulate(e->rep_times_s.begin(), e->rep_times_s.end(), 0.0) / 3.0, 1e-15);
    EXPECT_EQ(e->result_rows, 1u);
  }
  EXPECT_EQ(b.result_checksum, r.result_checksum);
}

TEST(RunStrategy, TimeoutChargesTimeout) {
  const auto db = stats_toy_db();
  HarnessConfig cfg;
  cfg.timeout_s = 1e-9;
  const auto e = run_strategy("q1", parse_query(kVotesBadgesUsers), db, Strategy::Base, cfg);
  EXPECT_TRUE(e.timed_out);
  EXPECT_EQ(e.mean_s, cfg.timeout_s);
}

TEST(RunWorkload, BothTimedOutAreExcluded) {
  const auto db = stats_toy_db();
  HarnessConfig cfg;
  cfg.timeout_s = 1e-9;
  cfg.repeats = 2;
  const auto log = run_workload(db, {"q1"}, {parse_query(kVotesBadgesUsers)}, cfg);
  ASSERT_EQ(log.entries.size(), 2u);
  EXPECT_TRUE(log.excluded("q1"));
  std::map<std::string, FeatureVector> feats{{"q1", FeatureVector{}}};
  EXPECT_TRUE(build_dataset(log, feats).empty());
  const auto rep = smash_e2e(db, {"q1"}, {parse_query(kVotesBadgesUsers)}, stub_model(false), 0.0, log, StatsCatalog::analyze(db));
  EXPECT_EQ(rep.excluded_query_ids, std::vector<std::string>{"q1"});
  EXPECT_TRUE(rep.queries.empty());
}

TEST(RunWorkload, SkipsCyclicAndChecksLengths) {
  Database db;
  db.add(make_int_relation("E", {"s", "t"}, {{1, 2}, {2, 3}, {3, 1}}));
  const auto tri = parse_query("SELECT MIN(a.s) FROM E AS a, E AS b, E AS c WHERE a.t = b.s AND b.t = c.s AND c.t = a.s");
  const auto one = parse_query("SELECT MIN(a.s) FROM E AS a, E AS b WHERE a.t = b.s");
  HarnessConfig cfg;
  cfg.repeats = 1;
  const auto log = run_workload(db, {"tri", "path"}, {tri, one}, cfg);
  ASSERT_EQ(log.skipped.size(), 1u);
  EXPECT_EQ(log.skipped[0].query_id, "tri");
  EXPECT_EQ(log.query_ids(), std::vector<std::string>{"path"});
  EXPECT_EQ(code_of([&] { run_workload(db, {"a"}, {tri, one}, cfg); }), ErrorCode::LengthMismatch);
}

TEST(RunLog, JsonRoundTripAndTimingFreeView) {
  const auto db = stats_toy_db();
  HarnessConfig cfg;
  cfg.repeats = 2;
  cfg.seed = 7;
  const auto log = run_workload(db, {"q1"}, {parse_query(kVotesBadgesUsers)}, cfg);
  const auto back = RunLog::from_json(nlohmann::json::parse(log.to_json().dump()));
  EXPECT_EQ(back.to_json().dump(), log.to_json().dump());
  EXPECT_EQ(back.config.seed, 7u);
  const auto bare = log.to_json(false);
  EXPECT_FALSE(bare["entries"][0].contains("mean_s"));
  EXPECT_FALSE(bare["entries"][0].contains("rep_times_s"));
  const auto again = run_workload(db, {"q1"}, {parse_query(kVotesBadgesUsers)}, cfg);
  EXPECT_EQ(again.to_json(false).dump(), bare.dump());
}

TEST(ResultChecksum, OrderIndependent) {
  auto a = make_int_relation("r", {"x", "y"}, {{1, 2}, {3, 4}, {1, 2}});
  auto b = make_int_relation("r", {"x", "y"}, {{3, 4}, {1, 2}, {1, 2}});
  auto c = make_int_relation("r", {"x", "y"}, {{3, 4}, {1, 2}});
  EXPECT_EQ(result_checksum(a), result_checksum(b));
  EXPECT_NE(result_checksum(a), result_checksum(c));
}

TEST(BuildDataset, LabelsAndExclusions) {
  RunLog log;
  log.entries = {entry("a", Strategy::Base, 3.38), entry("a", Strategy::Rewriting, 0.11),
                 entry("b", Strategy::Base, 0.05), entry("b", Strategy::Rewriting, 0.09),
                 entry("c", Strategy::Base, 100, true), entry("c", Strategy::Rewriting, 100, true),
                 entry("d", Strategy::Base, 100, true), entry("d", Strategy::Rewriting, 2.0)};
  std::map<std::string, FeatureVector> feats;
  for (const char* id : {"a", "b", "c", "d"}) feats[id] = FeatureVector{};
  const auto ex = build_dataset(log, feats);
  ASSERT_EQ(ex.size(), 3u);
  EXPECT_EQ(ex[0].id, "a");
  EXPECT_EQ(ex[0].class_label, 1);
  EXPECT_EQ(ex[1].class_label, 0);
  EXPECT_EQ(ex[2].id, "d");
  EXPECT_EQ(ex[2].t_original, 100.0);
  EXPECT_EQ(ex[2].class_label, 1);
}

TEST(BuildDataset, MissingStrategyOrFeatures) {
  RunLog log;
  log.entries = {entry("a", Strategy::Base, 1.0)};
  std::map<std::string, FeatureVector> feats{{"a", FeatureVector{}}};
  EXPECT_EQ(code_of([&] { build_dataset(log, feats); }), ErrorCode::MissingStrategy);
  log.entries.push_back(entry("a", Strategy::Rewriting, 1.0));
  EXPECT_EQ(code_of([&] { build_dataset(log, {}); }), ErrorCode::MissingStrategy);
}

TEST(SmashE2e, PerfectModelMatchesOracle) {
  const auto f = fabricated(40);
  ASSERT_TRUE(std::count(f.oma.begin(), f.oma.end(), true) > 0);
  ASSERT_TRUE(std::count(f.oma.begin(), f.oma.end(), false) > 0);
  const auto rep = smash_e2e(f.w.db, f.w.ids, f.w.queries, stub_model(true), 0.0, f.log, f.stats);
  ASSERT_EQ(rep.queries.size(), 40u);
  EXPECT_NEAR(chosen_total(rep), rep.strategies.at("OracleBest").total_seconds, 1e-9);
  EXPECT_EQ(rep.strategies.at("SMASH").slowdowns, 0u);
  EXPECT_EQ(rep.strategies.at("Rewriting").slowdowns,
            static_cast<std::size_t>(std::count(f.oma.begin(), f.oma.end(), false)));
  double latency = 0.0;
  for (const auto& q : rep.queries) {
    EXPECT_LE(std::min(q.base_s, q.rewriting_s), q.base_s);
    latency += q.decision_s;
    EXPECT_GE(q.decision_s, 0.0);
  }
  EXPECT_NEAR(rep.strategies.at("SMASH").total_seconds, chosen_total(rep) + latency, 1e-9);
  const auto& base = rep.strategies.at("Base");
  EXPECT_NEAR(base.oma_seconds + base.enum_seconds, base.total_seconds, 1e-9);
}

TEST(SmashE2e, AlwaysOriginalEqualsBase) {
  const auto f = fabricated(25);
  const auto rep = smash_e2e(f.w.db, f.w.ids, f.w.queries, stub_model(false, 0.0), 0.0, f.log, f.stats);
  for (const auto& q : rep.queries) EXPECT_EQ(q.chosen, "Base");
  EXPECT_NEAR(chosen_total(rep), rep.strategies.at("Base").total_seconds, 1e-9);
  const auto all = smash_e2e(f.w.db, f.w.ids, f.w.queries, stub_model(false, 1.0), 0.0, f.log, f.stats);
  EXPECT_NEAR(chosen_total(all), all.strategies.at("Rewriting").total_seconds, 1e-9);
}

TEST(SmashE2e, PermutationInvariant) {
  const auto f = fabricated(30);
  const auto rep = smash_e2e(f.w.db, f.w.ids, f.w.queries, stub_model(true), 0.0, f.log, f.stats);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(4));
  std::vector<std::string> ids;
  std::vector<QuerySpec> qs;
  for (auto i : perm) {
    ids.push_back(f.w.ids[i]);
    qs.push_back(f.w.queries[i]);
  }
  const auto shuffled = smash_e2e(f.w.db, ids, qs, stub_model(true), 0.0, f.log, f.stats);
  EXPECT_NEAR(chosen_total(shuffled), chosen_total(rep), 1e-9);
  for (const char* s : {"Base", "Rewriting", "OracleBest"})
    EXPECT_NEAR(shuffled.strategies.at(s).total_seconds, rep.strategies.at(s).total_seconds, 1e-9);
  std::map<std::string, std::string> a, b;
  for (const auto& q : rep.queries) a[q.query_id] = q.chosen;
  for (const auto& q : shuffled.queries) b[q.query_id] = q.chosen;
  EXPECT_EQ(a, b);
}

TEST(SmashE2e, ErrorsAndEmptyWorkload) {
  const auto f = fabricated(5);
  auto bad = stub_model(false);
  bad.feature_names = {"x", "y", "z"};
  EXPECT_EQ(code_of([&] { smash_e2e(f.w.db, f.w.ids, f.w.queries, bad, 0.0, f.log, f.stats); }),
            ErrorCode::UnseenFeatureDimension);
  EXPECT_EQ(code_of([&] { smash_e2e(f.w.db, {"x"}, f.w.queries, stub_model(false), 0.0, f.log, f.stats); }),
            ErrorCode::LengthMismatch);
  const auto rep = smash_e2e(f.w.db, {}, {}, stub_model(false), 0.0, RunLog{}, f.stats);
  EXPECT_TRUE(rep.queries.empty());
  EXPECT_EQ(rep.strategies.size(), 4u);
  EXPECT_EQ(rep.strategies.at("SMASH").total_seconds, 0.0);
}

TEST(E2eReport, Serializations) {
  const auto f = fabricated(10);
  const auto rep = smash_e2e(f.w.db, f.w.ids, f.w.queries, stub_model(true), 0.0, f.log, f.stats);
  const auto j = rep.to_json();
  for (const char* s : {"Base", "Rewriting", "SMASH", "OracleBest"}) {
    EXPECT_TRUE(j["strategies"].contains(s));
    EXPECT_NE(rep.text().find(s), std::string::npos);
  }
  EXPECT_EQ(j["queries"].size(), 10u);
}
