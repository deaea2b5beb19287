#include "smash/augmentation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "smash/error.hpp"
#include "smash/random.hpp"

namespace smash {
namespace {

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return total_less(a, b); }
};

const Relation& table_of(const QuerySpec& q, const Database& db, const std::string& alias) {
  const auto* t = q.find_alias(alias);
  if (t == nullptr) throw Error(ErrorCode::UnknownAttribute, "unknown alias '" + alias + "'");
  return db.get(t->table);
}

std::vector<Value> column_values(const Relation& rel, const std::string& attr) {
  const auto i = rel.require_index(attr);
  std::vector<Value> out;
  out.reserve(rel.size());
  for (const auto& row : rel.rows) out.push_back(row[i]);
  return out;
}

/// Most (or least) frequent value other than `except`; ties go to the
/// smallest value.
std::optional<Value> by_frequency(const std::vector<Value>& values, const Value& except, bool most) {
  std::map<Value, std::size_t, ValueLess> freq;
  for (const auto& v : values) ++freq[v];
  std::optional<Value> best;
  std::size_t best_n = 0;
  for (const auto& [v, n] : freq) {
    if (join_equal(v, except)) continue;
    if (!best || (most ? n > best_n : n < best_n)) {
      best = v;
      best_n = n;
    }
  }
  return best;
}

std::optional<Value> percentile(std::vector<Value> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end(), ValueLess{});
  return values[static_cast<std::size_t>(q * static_cast<double>(values.size() - 1))];
}

/// Replacement literal pushing the filter toward a larger (or smaller)
/// result; the literal itself when the column offers nothing else.
Value perturbed(const FilterCondition& f, const std::vector<Value>& values, bool bigger) {
  std::optional<Value> v;
  switch (f.op) {
    case CompareOp::Eq: v = by_frequency(values, f.literal, bigger); break;
    case CompareOp::Ne: v = by_frequency(values, f.literal, !bigger); break;
    case CompareOp::Gt:
    case CompareOp::Ge: v = percentile(values, bigger ? 0.25 : 0.75); break;
    case CompareOp::Lt:
    case CompareOp::Le: v = percentile(values, bigger ? 0.75 : 0.25); break;
  }
  return v ? *v : f.literal;
}

std::size_t passing(const std::vector<Value>& values, const FilterCondition& f, const Value& literal) {
  const Predicate p{f.ref.attribute, f.op, literal};
  std::size_t n = 0;
  for (const auto& v : values) n += predicate_holds(p, v) ? 1 : 0;
  return n;
}

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::vector<QuerySpec> augment_filters(const QuerySpec& q, const Database& db) {
  std::vector<QuerySpec> out{q};
  if (q.filters.empty()) return out;
  struct Choice {
    Value bigger, smaller;
    std::size_t change = 0;
  };
  std::vector<Choice> choices;
  for (const auto& f : q.filters) {
    const auto values = column_values(table_of(q, db, f.ref.alias), f.ref.attribute);
    Choice c{perturbed(f, values, true), perturbed(f, values, false), 0};
    const auto base = passing(values, f, f.literal);
    c.change = distance(passing(values, f, c.bigger), base) + distance(passing(values, f, c.smaller), base);
    choices.push_back(std::move(c));
  }
  if (q.filters.size() == 1) {
    QuerySpec v = q;
    const auto& c = choices.front();
    v.filters[0].literal = join_equal(c.bigger, q.filters[0].literal) ? c.smaller : c.bigger;
    out.push_back(std::move(v));
    return out;
  }
  std::vector<std::size_t> order(q.filters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return choices[a].change > choices[b].change; });
  QuerySpec bigger = q;
  QuerySpec smaller = q;
  for (std::size_t k = 0; k < 2; ++k) {
    bigger.filters[order[k]].literal = choices[order[k]].bigger;
    smaller.filters[order[k]].literal = choices[order[k]].smaller;
  }
  out.push_back(std::move(bigger));
  out.push_back(std::move(smaller));
  return out;
}

std::vector<QuerySpec> augment_aggregate_attribute(const QuerySpec& q, const Catalog& catalog) {
  if (!q.is_aggregate()) throw Error(ErrorCode::NotAggregate, "aggregate-attribute augmentation needs an aggregate query");
  std::vector<QuerySpec> out;
  for (const auto& t : q.tables) {
    auto it = catalog.find(t.table);
    if (it == catalog.end()) throw Error(ErrorCode::UnknownTable, "unknown table '" + t.table + "'");
    if (it->second.empty()) throw Error(ErrorCode::UnknownAttribute, "table '" + t.table + "' has no columns");
    QuerySpec v = q;
    v.select.clear();
    for (const auto& s : q.select)
      if (!s.aggregate) v.select.push_back(s);
    v.select.push_back({true, AggFn::Min, false, AttrRef{t.alias, it->second.front()}});
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<QuerySpec> augment_enumeration(const QuerySpec& q, std::uint64_t seed) {
  if (q.join_conds.empty()) throw Error(ErrorCode::NoJoins, "enumeration augmentation needs a join condition");
  std::vector<AttrRef> attrs;
  for (const auto& j : q.join_conds)
    for (const auto& r : {j.left, j.right})
      if (std::find(attrs.begin(), attrs.end(), r) == attrs.end()) attrs.push_back(r);
  auto variant = [&](std::vector<AttrRef> refs) {
    QuerySpec v = q;
    v.select.clear();
    v.group_by.clear();
    for (auto& r : refs) v.select.push_back({false, AggFn::Min, false, std::move(r)});
    return v;
  };
  if (attrs.size() < 3) return {variant(attrs)};
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < attrs.size(); ++i)
    for (std::size_t j = i + 1; j < attrs.size(); ++j) pairs.emplace_back(i, j);
  Rng rng(seed);
  shuffle(pairs, rng);
  pairs.resize(3);
  std::sort(pairs.begin(), pairs.end());
  std::vector<QuerySpec> out;
  for (const auto& [i, j] : pairs) out.push_back(variant({attrs[i], attrs[j]}));
  return out;
}

void WorkloadSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::UnsupportedConstruct, "invalid workload spec: " + what); };
  if (min_relations == 0 || min_relations > max_relations) fail("relation range");
  if (min_rows == 0 || min_rows > max_rows) fail("row range");
  if (tables_per_pool == 0) fail("tables_per_pool");
  if (fanout == 0) fail("fanout");
  for (double p : {filter_probability, min_selectivity, max_selectivity, dangling_fraction, regime_mix})
    if (!(p >= 0.0 && p <= 1.0)) fail("probability outside [0, 1]");
  if (min_selectivity > max_selectivity) fail("selectivity range");
}

namespace {

constexpr std::int64_t kPayloadRange = 1000;

Relation fan_table(const std::string& name, std::size_t rows, std::int64_t keys, double dangling, std::int64_t tag,
                   Rng& rng) {
  Relation r(name, {"id", "a", "b", "v"}, {ColumnType::Int, ColumnType::Int, ColumnType::Int, ColumnType::Int});
  r.rows.reserve(rows);
  auto key = [&](std::size_t row, std::int64_t col) -> std::int64_t {
    // Dangling keys are negative and unique to this table and column.
    if (uniform01(rng) < dangling) return -(tag * 10'000'000 + col * 1'000'000 + static_cast<std::int64_t>(row)) - 1;
    return uniform_int(rng, 0, keys - 1);
  };
  for (std::size_t i = 0; i < rows; ++i) {
    const auto a = key(i, 0);
    const auto b = key(i, 1);
    r.rows.push_back({static_cast<std::int64_t>(i), a, b, uniform_int(rng, 0, kPayloadRange - 1)});
  }
  return r;
}

Relation one_table(const std::string& name, std::size_t rows, Rng& rng) {
  Relation r(name, {"id", "a", "b", "v"}, {ColumnType::Int, ColumnType::Int, ColumnType::Int, ColumnType::Int});
  std::vector<std::int64_t> pa(rows), pb(rows);
  std::iota(pa.begin(), pa.end(), 0);
  std::iota(pb.begin(), pb.end(), 0);
  shuffle(pa, rng);
  shuffle(pb, rng);
  r.rows.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i)
    r.rows.push_back({static_cast<std::int64_t>(i), pa[i], pb[i], uniform_int(rng, 0, kPayloadRange - 1)});
  return r;
}

std::string pad_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%04zu", i + 1);
  return buf;
}

}  // namespace

Workload generate_workload(const WorkloadSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Workload w;
  const auto mid_rows = (spec.min_rows + spec.max_rows) / 2;
  const auto keys = std::max<std::int64_t>(1, static_cast<std::int64_t>(mid_rows / spec.fanout));
  for (std::size_t t = 0; t < spec.tables_per_pool; ++t) {
    const auto rows = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(spec.min_rows),
                                                           static_cast<std::int64_t>(spec.max_rows)));
    w.db.add(fan_table("fan_" + std::to_string(t), rows, keys, spec.dangling_fraction, static_cast<std::int64_t>(t), rng));
  }
  // One row count for the whole pool so permutation keys match one-to-one.
  const auto one_rows = static_cast<std::size_t>(
      uniform_int(rng, static_cast<std::int64_t>(spec.min_rows), static_cast<std::int64_t>(spec.max_rows)));
  for (std::size_t t = 0; t < spec.tables_per_pool; ++t) w.db.add(one_table("one_" + std::to_string(t), one_rows, rng));

  const char* key_cols[] = {"a", "b"};
  for (std::size_t i = 0; i < spec.n_base_queries; ++i) {
    const bool fan = uniform01(rng) < spec.regime_mix;
    const auto k = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(spec.min_relations),
                                                        static_cast<std::int64_t>(spec.max_relations)));
    QuerySpec q;
    for (std::size_t j = 0; j < k; ++j) {
      const auto t = uniform_index(rng, spec.tables_per_pool);
      q.tables.push_back({(fan ? "fan_" : "one_") + std::to_string(t), "t" + std::to_string(j)});
      if (j > 0) {
        const auto p = uniform_index(rng, j);
        q.join_conds.push_back({{"t" + std::to_string(p), key_cols[uniform_index(rng, 2)]},
                                {"t" + std::to_string(j), key_cols[uniform_index(rng, 2)]}});
      }
      if (uniform01(rng) < spec.filter_probability) {
        const double sel = spec.min_selectivity + (spec.max_selectivity - spec.min_selectivity) * uniform01(rng);
        const auto lit = static_cast<std::int64_t>(sel * static_cast<double>(kPayloadRange));
        q.filters.push_back({{"t" + std::to_string(j), "v"}, CompareOp::Lt, Value{lit}});
      }
    }
    const auto pick = [&] { return "t" + std::to_string(uniform_index(rng, k)); };
    if (fan) {
      q.select.push_back({true, AggFn::Min, false, AttrRef{pick(), "id"}});
    } else if (uniform01(rng) < 0.5) {
      q.select.push_back({true, AggFn::Count, false, std::nullopt});
    } else {
      q.select.push_back({false, AggFn::Min, false, AttrRef{pick(), "id"}});
      q.select.push_back({false, AggFn::Min, false, AttrRef{pick(), "v"}});
    }
    w.ids.push_back(pad_id(i));
    w.queries.push_back(std::move(q));
  }
  return w;
}

}  // namespace smash
