#pragma once

#include "smash/query.hpp"
#include "smash/relation.hpp"

namespace smash::testing {

/// R(a,b), S(b,c), T(c,d): the chain join R.b=S.b, S.c=T.c has one answer
/// (1,1,10,100).
inline Database chain_db() {
  Database db;
  db.add(make_int_relation("R", {"a", "b"}, {{1, 1}, {2, 2}, {3, 3}}));
  db.add(make_int_relation("S", {"b", "c"}, {{1, 10}, {1, 11}, {4, 40}}));
  db.add(make_int_relation("T", {"c", "d"}, {{10, 100}, {12, 120}}));
  return db;
}

inline const char* kChainMin = "SELECT MIN(R.a) FROM R AS R, S AS S, T AS T WHERE R.b = S.b AND S.c = T.c";
inline const char* kChainEnum = "SELECT R.a, S.b, S.c, T.d FROM R AS R, S AS S, T AS T WHERE R.b = S.b AND S.c = T.c";

inline const char* kVotesBadgesUsers =
    "SELECT MIN(u.Id) FROM votes as v, badges as b, users as u "
    "WHERE u.Id = v.UserId AND v.UserId = b.UserId "
    "AND v.BountyAmount>=0 AND v.BountyAmount<=50 AND u.DownVotes=0";

inline const char* kCommentsPostsVotesUsers =
    "SELECT MIN(c.Id) FROM comments AS c, posts AS p, votes AS v, users AS u "
    "WHERE u.Id = p.OwnerUserId AND u.Id = c.UserId AND u.Id = v.UserId AND u.Views>=0 "
    "AND p.Score>=0 AND p.Score<=28 AND p.ViewCount>=0 AND p.ViewCount<=6517 "
    "AND p.AnswerCount>=0 AND p.AnswerCount<=5 AND p.FavoriteCount>=0 AND p.FavoriteCount<=8 "
    "AND c.CreationDate>='2010-07-27 12:03:40' AND p.CreationDate>='2010-07-27 11:29:20' "
    "AND p.CreationDate<='2014-09-13 02:50:15' AND u.CreationDate>='2010-07-27 09:38:05'";

/// Five-row toy tables for votes, badges and users.
inline Database stats_toy_db() {
  Database db;
  db.add(make_int_relation("users", {"Id", "DownVotes", "Views"},
                           {{1, 0, 10}, {2, 0, 5}, {3, 10, 7}, {4, 0, 0}, {5, 2, 1}}));
  db.add(make_int_relation("votes", {"Id", "UserId", "BountyAmount"},
                           {{1, 1, 0}, {2, 2, 50}, {3, 3, 40}, {4, 4, 100}, {5, 1, 25}}));
  db.add(make_int_relation("badges", {"Id", "UserId"}, {{1, 1}, {2, 1}, {3, 3}, {4, 4}, {5, 5}}));
  return db;
}

}  // namespace smash::testing
