#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "smash/acyclic.hpp"
#include "smash/error.hpp"

using namespace smash;

namespace {

NormalizedCQ cq_of(const std::string& sql) { return normalize(parse_query(sql)); }

std::size_t atom_of(const NormalizedCQ& cq, const std::string& alias) {
  for (std::size_t i = 0; i < cq.atoms.size(); ++i)
    if (cq.atoms[i].alias == alias) return i;
  ADD_FAILURE() << alias;
  return 0;
}

// Independent connectedness check: every pair of nodes sharing a class is
// joined by a path whose nodes all contain it; the parent links form a tree.
bool exhaustive_connectedness(const JoinTree& t, const NormalizedCQ& cq) {
  const std::size_t n = cq.atoms.size();
  if (t.size() != n || t.parent[t.root]) return false;
  std::size_t edges = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (v != t.root && !t.parent[v]) return false;
    if (t.parent[v]) ++edges;
    // Walking up from any node reaches the root without a cycle.
    std::size_t cur = v, steps = 0;
    while (t.parent[cur] && steps <= n) cur = *t.parent[cur], ++steps;
    if (cur != t.root) return false;
  }
  if (edges != n - 1) return false;
  auto ancestors = [&](std::size_t v) {
    std::vector<std::size_t> out{v};
    while (t.parent[out.back()]) out.push_back(*t.parent[out.back()]);
    return out;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto pa = ancestors(a), pb = ancestors(b);
      std::size_t lca = 0;
      for (auto x : pa)
        if (std::find(pb.begin(), pb.end(), x) != pb.end()) {
          lca = x;
          break;
        }
      std::vector<std::size_t> path;
      for (auto x : pa) {
        path.push_back(x);
        if (x == lca) break;
      }
      for (auto x : pb) {
        if (x == lca) break;
        path.push_back(x);
      }
      for (auto c : cq.atoms[a].classes()) {
        if (!cq.atoms[b].has_class(c)) continue;
        for (auto x : path)
          if (!cq.atoms[x].has_class(c)) return false;
      }
    }
  }
  return true;
}

std::set<std::pair<std::size_t, std::size_t>> undirected_edges(const JoinTree& t) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t.parent[v]) out.insert(std::minmax(v, *t.parent[v]));
  return out;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

OmaResult definitional_0ma(const NormalizedCQ& cq) {
  OmaResult r;
  if (!cq.aggregate) {
    r.failure_reason = OmaFailure::NotAggregate;
    return r;
  }
  for (const auto& o : cq.output)
    if (o.aggregate && !(o.fn == AggFn::Min || o.fn == AggFn::Max || (o.distinct && o.cls))) {
      r.failure_reason = OmaFailure::NotSetSafe;
      return r;
    }
  std::set<ClassId> need(cq.group_by.begin(), cq.group_by.end());
  for (const auto& o : cq.output)
    if (o.cls) need.insert(*o.cls);
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    bool all = true;
    for (auto c : need) all = all && cq.atoms[i].has_class(c);
    if (all) {
      r.is_0ma = true;
      r.guard = i;
      return r;
    }
  }
  r.failure_reason = OmaFailure::NotGuarded;
  return r;
}

}  // namespace

TEST(Hypergraph, ChainEdges) {
  const auto db = smash::testing::chain_db();
  const auto catalog = db.catalog();
  const auto cq = normalize(parse_query(smash::testing::kChainMin), &catalog);
  const auto hg = build_hypergraph(cq);
  ASSERT_EQ(hg.edges.size(), 3u);
  EXPECT_EQ(hg.edges[0].vertices, (std::set<ClassId>{0, 1}));
  EXPECT_EQ(hg.edges[1].vertices, (std::set<ClassId>{1, 2}));
  EXPECT_EQ(hg.edges[2].vertices, (std::set<ClassId>{2, 3}));
  EXPECT_EQ(hg.vertices.size(), 4u);
}

TEST(Gyo, TriangleIsCyclic) {
  const auto cq = cq_of("SELECT a.x FROM R1 AS a, R2 AS b, R3 AS c WHERE a.y = b.y AND b.z = c.z AND c.x = a.x");
  const auto hg = build_hypergraph(cq);
  EXPECT_EQ(hg.edges.size(), 3u);
  EXPECT_EQ(hg.vertices.size(), 3u);
  const auto r = gyo_reduce(hg);
  EXPECT_FALSE(r.acyclic);
  EXPECT_EQ(r.residual.size(), 3u);
  EXPECT_EQ(code_of([&] { make_join_tree(cq); }), ErrorCode::CyclicQuery);
}

TEST(Gyo, EmbeddedTriangleIsCyclic) {
  const auto cq = cq_of(
      "SELECT a.x FROM R1 AS a, R2 AS b, R3 AS c, R4 AS d "
      "WHERE a.y = b.y AND b.z = c.z AND c.x = a.x AND d.w = a.w");
  EXPECT_FALSE(gyo_reduce(build_hypergraph(cq)).acyclic);
}

TEST(Gyo, ChainAndSingleEdgeAreAcyclic) {
  const auto chain = gyo_reduce(build_hypergraph(cq_of(smash::testing::kChainMin)));
  EXPECT_TRUE(chain.acyclic);
  EXPECT_EQ(chain.ears.size(), 3u);
  EXPECT_FALSE(chain.ears.back().witness.has_value());
  const auto single = gyo_reduce(build_hypergraph(cq_of("SELECT MIN(a.x) FROM t AS a")));
  EXPECT_TRUE(single.acyclic);
  EXPECT_EQ(single.ears.size(), 1u);
}

TEST(JoinTree, VotesBadgesUsersRootedAtUsers) {
  const auto cq = cq_of(smash::testing::kVotesBadgesUsers);
  const auto t = make_join_tree(cq);
  const auto u = atom_of(cq, "u"), v = atom_of(cq, "v"), b = atom_of(cq, "b");
  EXPECT_TRUE(t.oma);
  EXPECT_EQ(t.root, u);
  EXPECT_EQ(t.children[u], (std::vector<std::size_t>{b, v}));
  EXPECT_EQ(t.depth(), 1u);
}

TEST(JoinTree, StarQueryCommentsAtRoot) {
  const auto cq = cq_of(smash::testing::kCommentsPostsVotesUsers);
  const auto t = make_join_tree(cq);
  const auto c = atom_of(cq, "c"), u = atom_of(cq, "u");
  EXPECT_EQ(t.root, c);
  EXPECT_EQ(t.children[c], (std::vector<std::size_t>{u}));
  std::set<std::size_t> leaves(t.children[u].begin(), t.children[u].end());
  EXPECT_EQ(leaves, (std::set<std::size_t>{atom_of(cq, "p"), atom_of(cq, "v")}));
}

TEST(JoinTree, ChainRootedAtGuard) {
  const auto cq = cq_of(smash::testing::kChainMin);
  const auto t = make_join_tree(cq);
  EXPECT_EQ(t.root, 0u);
  EXPECT_EQ(t.guard, std::optional<std::size_t>{0});
  EXPECT_EQ(t.children[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(t.children[1], (std::vector<std::size_t>{2}));
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_EQ(t.post_order(), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(t.pre_order(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(t.path(2, 0), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(JoinTree, NonOmaRootIsLastSurvivor) {
  const auto cq = cq_of(smash::testing::kChainEnum);
  const auto gyo = gyo_reduce(build_hypergraph(cq));
  const auto t = make_join_tree(cq);
  EXPECT_FALSE(t.oma);
  EXPECT_EQ(t.root, gyo.ears.back().atom);
}

TEST(JoinTree, RandomTreeShapedQueries) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = smash::testing::random_instance(seed);
    const auto cq = normalize(inst.query);
    const auto gyo = gyo_reduce(build_hypergraph(cq));
    ASSERT_TRUE(gyo.acyclic) << to_sql(inst.query);
    const auto t = make_join_tree(cq);
    EXPECT_TRUE(exhaustive_connectedness(t, cq)) << to_sql(inst.query);
    EXPECT_TRUE(satisfies_connectedness(t, cq));
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto rr = reroot(t, r);
      EXPECT_EQ(rr.root, r);
      EXPECT_EQ(undirected_edges(rr), undirected_edges(t));
      EXPECT_TRUE(exhaustive_connectedness(rr, cq));
    }
  }
}

TEST(JoinTree, ConnectednessCheckerRejectsBrokenTrees) {
  const auto cq = cq_of(smash::testing::kChainMin);
  auto t = make_join_tree(cq);
  // Hang T directly under R: class c now skips S.
  t.parent[2] = 0;
  t.children[1].clear();
  t.children[0] = {1, 2};
  EXPECT_FALSE(satisfies_connectedness(t, cq));
  EXPECT_FALSE(exhaustive_connectedness(t, cq));
}

TEST(Oma, StarQueryGuardedByComments) {
  const auto cq = cq_of(smash::testing::kCommentsPostsVotesUsers);
  const auto r = classify_0ma(cq);
  EXPECT_TRUE(r.is_0ma);
  EXPECT_EQ(r.guard, std::optional<std::size_t>{atom_of(cq, "c")});
}

TEST(Oma, CountStarIsNotSetSafe) {
  std::string sql = smash::testing::kCommentsPostsVotesUsers;
  sql.replace(sql.find("MIN(c.Id)"), 9, "COUNT(*)");
  const auto r = classify_0ma(cq_of(sql));
  EXPECT_FALSE(r.is_0ma);
  EXPECT_EQ(r.failure_reason, std::optional<OmaFailure>{OmaFailure::NotSetSafe});
}

TEST(Oma, EnumerationAndUnguarded) {
  EXPECT_EQ(classify_0ma(cq_of(smash::testing::kChainEnum)).failure_reason,
            std::optional<OmaFailure>{OmaFailure::NotAggregate});
  const auto r = classify_0ma(cq_of("SELECT MIN(R.a), MIN(T.d) FROM R AS R, S AS S, T AS T WHERE R.b = S.b AND S.c = T.c"));
  EXPECT_EQ(r.failure_reason, std::optional<OmaFailure>{OmaFailure::NotGuarded});
}

TEST(Oma, AgreesWithDefinition) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto cq = normalize(smash::testing::random_instance(seed).query);
    const auto got = classify_0ma(cq);
    const auto want = definitional_0ma(cq);
    ASSERT_EQ(got.is_0ma, want.is_0ma) << seed;
    EXPECT_EQ(got.failure_reason, want.failure_reason);
    if (got.is_0ma) {
      for (auto c : cq.output_classes()) EXPECT_TRUE(cq.atoms[*got.guard].has_class(c));
      const auto t = make_join_tree(cq);
      EXPECT_EQ(t.root, *got.guard);
    }
  }
}

TEST(JoinTree, JsonAndText) {
  const auto cq = cq_of(smash::testing::kVotesBadgesUsers);
  const auto t = make_join_tree(cq);
  const auto j = join_tree_json(t, cq);
  EXPECT_TRUE(j.contains("nodes"));
  const auto text = join_tree_text(t, cq);
  EXPECT_LT(text.find("users"), text.find("badges"));
  EXPECT_LT(text.find("badges"), text.find("votes"));
}
