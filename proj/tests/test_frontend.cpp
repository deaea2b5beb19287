#include <gtest/gtest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "smash/error.hpp"
#include "smash/normalize.hpp"
#include "smash/query.hpp"
#include "smash/random.hpp"
#include "smash/sql.hpp"

using namespace smash;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

ClassId class_of(const NormalizedCQ& cq, const std::string& alias, const std::string& attr) {
  for (const auto& a : cq.atoms)
    if (a.alias == alias)
      for (const auto& [name, c] : a.columns)
        if (name == attr) return c;
  ADD_FAILURE() << "no column " << alias << "." << attr;
  return -1;
}

}  // namespace

TEST(Parse, VotesBadgesUsers) {
  const auto q = parse_query(smash::testing::kVotesBadgesUsers);
  ASSERT_EQ(q.tables.size(), 3u);
  EXPECT_EQ(q.tables[0], (TableEntry{"votes", "v"}));
  EXPECT_EQ(q.tables[1], (TableEntry{"badges", "b"}));
  EXPECT_EQ(q.tables[2], (TableEntry{"users", "u"}));
  EXPECT_EQ(q.join_conds.size(), 2u);
  EXPECT_EQ(q.filters.size(), 3u);
  ASSERT_EQ(q.select.size(), 1u);
  EXPECT_TRUE(q.select[0].aggregate);
  EXPECT_EQ(q.select[0].fn, AggFn::Min);
  EXPECT_EQ(*q.select[0].ref, (AttrRef{"u", "Id"}));
  EXPECT_TRUE(q.is_aggregate());
}

TEST(Parse, EnumerationWithoutConditions) {
  const auto q = parse_query("select a.x from t as a;");
  EXPECT_FALSE(q.is_aggregate());
  EXPECT_TRUE(q.join_conds.empty());
  EXPECT_TRUE(q.filters.empty());
}

TEST(Parse, BareTableNameIsItsOwnAlias) {
  const auto q = parse_query("SELECT t.x FROM t");
  EXPECT_EQ(q.tables[0], (TableEntry{"t", "t"}));
}

TEST(Parse, LiteralOnLeftIsFlipped) {
  const auto q = parse_query("SELECT MIN(a.x) FROM t AS a WHERE 5 < a.x");
  ASSERT_EQ(q.filters.size(), 1u);
  EXPECT_EQ(q.filters[0].op, CompareOp::Gt);
}

TEST(Parse, AggregatesAndGroupBy) {
  const auto q = parse_query(
      "SELECT a.g, COUNT(*), COUNT(DISTINCT a.x), SUM(a.x), AVG(a.x), MAX(a.x) FROM t AS a GROUP BY a.g");
  ASSERT_EQ(q.select.size(), 6u);
  EXPECT_FALSE(q.select[1].ref.has_value());
  EXPECT_TRUE(q.select[2].distinct);
  EXPECT_EQ(q.group_by.size(), 1u);
}

TEST(Parse, StarIsRejected) {
  EXPECT_EQ(code_of([] { parse_query("SELECT * FROM t"); }), ErrorCode::UnsupportedConstruct);
}

TEST(Parse, UnsupportedConstructs) {
  for (const char* sql : {"SELECT a.x FROM t AS a WHERE a.x = 1 OR a.x = 2",
                          "SELECT a.x FROM t AS a WHERE a.x IN (1, 2)",
                          "SELECT a.x FROM t AS a WHERE a.y LIKE 'x%'",
                          "SELECT a.x FROM t AS a WHERE a.x BETWEEN 1 AND 2",
                          "SELECT a.x FROM t AS a LEFT JOIN u AS b ON a.x = b.x",
                          "SELECT MIN(a.x + 1) FROM t AS a"})
    EXPECT_EQ(code_of([&] { parse_query(sql); }), ErrorCode::UnsupportedConstruct) << sql;
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_query("SELECT a.x\nFROM t AS a WHERE a.x >");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(Parse, UndeclaredAliasIsRejected) { EXPECT_THROW(parse_query("SELECT b.x FROM t AS a"), Error); }

TEST(Parse, RoundTripThroughText) {
  for (const char* sql : {smash::testing::kVotesBadgesUsers, smash::testing::kCommentsPostsVotesUsers, smash::testing::kChainEnum,
                          "SELECT a.g, COUNT(DISTINCT a.x) FROM t AS a WHERE a.y <> 'it''s' GROUP BY a.g"}) {
    const auto q = parse_query(sql);
    EXPECT_EQ(parse_query(to_sql(q)), q) << sql;
  }
}

TEST(Parse, RandomSpecsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = smash::testing::random_instance(seed);
    EXPECT_EQ(parse_query(to_sql(inst.query)), inst.query);
  }
}

TEST(SqlGrammar, RewriterForms) {
  auto s = sql::parse_statement("CREATE UNLOGGED TABLE E3E2 AS SELECT *\nFROM E3 WHERE EXISTS (SELECT 1\n  FROM E2\n  WHERE E3.Id=E2.UserId)");
  EXPECT_EQ(s.kind, sql::Statement::Kind::CreateTable);
  EXPECT_TRUE(s.unlogged);
  EXPECT_EQ(s.name, "E3E2");
  ASSERT_EQ(s.select.where.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<sql::Exists>(s.select.where[0]));

  s = sql::parse_statement("CREATE VIEW E1 AS SELECT * FROM votes AS votes WHERE CAST(votes.BountyAmount AS INTEGER) >= 0");
  EXPECT_EQ(s.kind, sql::Statement::Kind::CreateView);
  EXPECT_EQ(std::get<sql::Comparison>(s.select.where[0]).lhs.cast_type, "INTEGER");

  EXPECT_EQ(sql::parse_statement("DROP TABLE IF EXISTS E3E2").kind, sql::Statement::Kind::DropTable);
  EXPECT_EQ(sql::parse_statement("DROP VIEW IF EXISTS E1;").kind, sql::Statement::Kind::DropView);
}

TEST(SqlGrammar, SplitStatementsIgnoresQuotedSemicolons) {
  const auto parts = sql::split_statements("SELECT 1 FROM a; SELECT 'x;y' FROM b;");
  ASSERT_EQ(parts.size(), 2u);
}

TEST(Normalize, UserIdChainCollapsesOneClass) {
  const auto cq = normalize(parse_query(smash::testing::kVotesBadgesUsers));
  const auto c = class_of(cq, "u", "Id");
  EXPECT_EQ(class_of(cq, "v", "UserId"), c);
  EXPECT_EQ(class_of(cq, "b", "UserId"), c);
  EXPECT_EQ(cq.atoms_with(c).size(), 3u);
  EXPECT_EQ(cq.join_classes(), (std::set<ClassId>{c}));
  EXPECT_EQ(cq.join_count(), 2u);
  EXPECT_EQ(cq.filter_count(), 3u);
}

TEST(Normalize, NoJoinsGivesSingletonClasses) {
  const auto cq = normalize(parse_query("SELECT a.x, a.y FROM t AS a WHERE a.z = 1"));
  EXPECT_EQ(cq.class_count(), 3u);
  EXPECT_TRUE(cq.join_classes().empty());
}

TEST(Normalize, ChainFixtureWithCatalog) {
  const auto db = smash::testing::chain_db();
  const auto catalog = db.catalog();
  const auto cq = normalize(parse_query(smash::testing::kChainMin), &catalog);
  EXPECT_EQ(cq.class_count(), 4u);
  EXPECT_EQ(class_of(cq, "R", "b"), class_of(cq, "S", "b"));
  EXPECT_EQ(class_of(cq, "S", "c"), class_of(cq, "T", "c"));
  EXPECT_NE(class_of(cq, "R", "a"), class_of(cq, "R", "b"));
  EXPECT_NE(class_of(cq, "T", "d"), class_of(cq, "S", "c"));
  // Class ids follow FROM order, then attribute order.
  EXPECT_EQ(class_of(cq, "R", "a"), 0);
  EXPECT_EQ(class_of(cq, "R", "b"), 1);
  EXPECT_EQ(class_of(cq, "S", "c"), 2);
  EXPECT_EQ(class_of(cq, "T", "d"), 3);
}

TEST(Normalize, IdempotentOnOwnOutput) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = smash::testing::random_instance(seed);
    const auto cq = normalize(inst.query);
    EXPECT_EQ(normalize(to_spec(cq)), cq) << to_sql(inst.query);
  }
}

// Two attributes share a class iff a chain of join conditions connects them.
TEST(Normalize, ClassesMatchTransitiveClosure) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = smash::testing::random_instance(seed);
    const auto& q = inst.query;
    std::vector<std::string> nodes;
    std::map<std::string, std::size_t> id;
    auto node = [&](const AttrRef& r) {
      auto [it, ins] = id.try_emplace(r.str(), nodes.size());
      if (ins) nodes.push_back(r.str());
      return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& j : q.join_conds) edges.emplace_back(node(j.left), node(j.right));
    const std::size_t n = nodes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (auto [a, b] : edges) reach[a][b] = reach[b][a] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;

    const auto cq = normalize(q);
    auto cls = [&](const std::string& s) {
      const auto dot = s.find('.');
      return class_of(cq, s.substr(0, dot), s.substr(dot + 1));
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(cls(nodes[i]) == cls(nodes[j]), reach[i][j]);
  }
}

TEST(Normalize, FiltersStayWithTheirAtom) {
  const auto cq = normalize(parse_query(smash::testing::kVotesBadgesUsers));
  EXPECT_EQ(cq.atoms[0].filters.size(), 2u);
  EXPECT_EQ(cq.atoms[1].filters.size(), 0u);
  EXPECT_EQ(cq.atoms[2].filters.size(), 1u);
  EXPECT_EQ(cq.atoms[2].filters[0].attribute, "DownVotes");
}
