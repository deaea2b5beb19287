#include "smash/operators.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "smash/error.hpp"

namespace smash {
namespace {

constexpr std::size_t kDeadlineStride = 4096;

void poll(ExecContext* ctx, std::size_t i) {
  if (ctx != nullptr && (i % kDeadlineStride) == 0) ctx->check_deadline();
}

std::vector<std::size_t> indices_of(const Relation& rel, std::span<const std::string> attrs) {
  std::vector<std::size_t> out;
  out.reserve(attrs.size());
  for (const auto& a : attrs) out.push_back(rel.require_index(a));
  return out;
}

Tuple key_of(const Tuple& row, const std::vector<std::size_t>& idx) {
  Tuple key;
  key.reserve(idx.size());
  for (auto i : idx) key.push_back(row[i]);
  return key;
}

void check_join_types(const Relation& left, const Relation& right, const std::vector<std::string>& shared) {
  for (const auto& a : shared) {
    const auto lt = left.types[left.require_index(a)];
    const auto rt = right.types[right.require_index(a)];
    if ((lt == ColumnType::String) != (rt == ColumnType::String))
      throw Error(ErrorCode::TypeMismatch, "join attribute '" + a + "' has incomparable types");
  }
}

using KeySet = std::unordered_set<Tuple, TupleHash, TupleJoinEqual>;
using KeyIndex = std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash, TupleJoinEqual>;

}  // namespace

const char* to_sql(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

bool holds(CompareOp op, int c) {
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

const char* to_sql(AggFn fn) {
  switch (fn) {
    case AggFn::Min: return "MIN";
    case AggFn::Max: return "MAX";
    case AggFn::Count: return "COUNT";
    case AggFn::Sum: return "SUM";
    case AggFn::Avg: return "AVG";
  }
  return "MIN";
}

void check_predicate_type(const Predicate& p, ColumnType column_type) {
  const bool literal_is_string = std::holds_alternative<std::string>(p.literal);
  if (p.cast_to_number) {
    if (literal_is_string)
      throw Error(ErrorCode::TypeMismatch, "CAST(" + p.attribute + ") compared with a string literal");
    return;
  }
  if ((column_type == ColumnType::String) != literal_is_string)
    throw Error(ErrorCode::TypeMismatch,
                "literal " + to_sql_literal(p.literal) + " is not comparable with '" + p.attribute + "'");
}

bool predicate_holds(const Predicate& p, const Value& cell) {
  if (p.cast_to_number) {
    if (const auto* s = std::get_if<std::string>(&cell)) {
      const auto number = parse_cell(*s, s->find_first_of(".eE") == std::string::npos ? ColumnType::Int
                                                                                       : ColumnType::Float);
      return holds(p.op, compare(number, p.literal));
    }
  }
  return holds(p.op, compare(cell, p.literal));
}

std::vector<std::string> shared_attributes(const Relation& left, const Relation& right) {
  std::vector<std::string> out;
  for (const auto& a : left.schema)
    if (right.index_of(a)) out.push_back(a);
  return out;
}

Relation apply_filter(const Relation& rel, std::span<const Predicate> preds, ExecContext* ctx) {
  std::vector<std::size_t> idx;
  idx.reserve(preds.size());
  for (const auto& p : preds) {
    const auto i = rel.require_index(p.attribute);
    check_predicate_type(p, rel.types[i]);
    idx.push_back(i);
  }
  Relation out(rel.name, rel.schema, rel.types);
  for (std::size_t r = 0; r < rel.rows.size(); ++r) {
    poll(ctx, r);
    const auto& row = rel.rows[r];
    bool keep = true;
    for (std::size_t k = 0; k < preds.size() && keep; ++k) keep = predicate_holds(preds[k], row[idx[k]]);
    if (keep) out.rows.push_back(row);
  }
  if (ctx != nullptr) ctx->counter.filters += 1;
  return out;
}

Relation semi_join(const Relation& left, const Relation& right, ExecContext* ctx) {
  const auto shared = shared_attributes(left, right);
  check_join_types(left, right, shared);
  Relation out(left.name, left.schema, left.types);
  if (shared.empty()) {
    if (!right.empty()) out.rows = left.rows;
  } else {
    const auto li = indices_of(left, shared);
    const auto ri = indices_of(right, shared);
    KeySet keys;
    keys.reserve(right.size());
    for (std::size_t r = 0; r < right.rows.size(); ++r) {
      poll(ctx, r);
      keys.insert(key_of(right.rows[r], ri));
    }
    Tuple probe;
    for (std::size_t r = 0; r < left.rows.size(); ++r) {
      poll(ctx, r);
      const auto& row = left.rows[r];
      probe.clear();
      for (auto i : li) probe.push_back(row[i]);
      if (keys.count(probe) != 0) out.rows.push_back(row);
    }
  }
  if (ctx != nullptr) {
    ctx->counter.semijoins += 1;
    ctx->counter.tuples_materialized += out.size();
  }
  return out;
}

Relation natural_join(const Relation& left, const Relation& right, ExecContext* ctx) {
  const auto shared = shared_attributes(left, right);
  check_join_types(left, right, shared);
  std::vector<std::size_t> right_rest;
  Relation out(left.name + "_" + right.name, left.schema, left.types);
  for (std::size_t i = 0; i < right.schema.size(); ++i) {
    if (!left.index_of(right.schema[i])) {
      right_rest.push_back(i);
      out.schema.push_back(right.schema[i]);
      out.types.push_back(right.types[i]);
    }
  }
  auto emit = [&](const Tuple& l, const Tuple& r) {
    Tuple t;
    t.reserve(out.schema.size());
    t.insert(t.end(), l.begin(), l.end());
    for (auto i : right_rest) t.push_back(r[i]);
    out.rows.push_back(std::move(t));
  };
  if (shared.empty()) {
    std::size_t n = 0;
    for (const auto& l : left.rows)
      for (const auto& r : right.rows) {
        poll(ctx, n++);
        emit(l, r);
      }
  } else {
    const auto li = indices_of(left, shared);
    const auto ri = indices_of(right, shared);
    KeyIndex index;
    index.reserve(right.size());
    for (std::size_t r = 0; r < right.rows.size(); ++r) {
      poll(ctx, r);
      index[key_of(right.rows[r], ri)].push_back(r);
    }
    Tuple probe;
    std::size_t n = 0;
    for (const auto& l : left.rows) {
      probe.clear();
      for (auto i : li) probe.push_back(l[i]);
      auto it = index.find(probe);
      if (it == index.end()) {
        poll(ctx, n++);
        continue;
      }
      for (auto r : it->second) {
        poll(ctx, n++);
        emit(l, right.rows[r]);
      }
    }
  }
  if (ctx != nullptr) {
    ctx->counter.joins += 1;
    ctx->counter.tuples_materialized += out.size();
  }
  return out;
}

Relation project(const Relation& rel, std::span<const std::string> attrs, ExecContext* ctx) {
  const auto idx = indices_of(rel, attrs);
  Relation out(rel.name, {attrs.begin(), attrs.end()}, {});
  for (auto i : idx) out.types.push_back(rel.types[i]);
  out.rows.reserve(rel.size());
  for (std::size_t r = 0; r < rel.rows.size(); ++r) {
    poll(ctx, r);
    out.rows.push_back(key_of(rel.rows[r], idx));
  }
  return out;
}

namespace {

struct Accumulator {
  AggFn fn;
  bool distinct;
  bool numeric_int = true;
  std::uint64_t count = 0;
  std::int64_t isum = 0;
  double fsum = 0.0;
  std::optional<Value> best;
  KeySet seen;

  void add(const Value* v) {
    if (v == nullptr) {  // COUNT(*)
      ++count;
      return;
    }
    if (distinct) {
      if (!seen.insert(Tuple{*v}).second) return;
    }
    ++count;
    switch (fn) {
      case AggFn::Min:
        if (!best || compare(*v, *best) < 0) best = *v;
        break;
      case AggFn::Max:
        if (!best || compare(*v, *best) > 0) best = *v;
        break;
      case AggFn::Sum:
      case AggFn::Avg:
        if (const auto* i = std::get_if<std::int64_t>(v)) {
          isum += *i;
        } else {
          numeric_int = false;
          fsum += as_double(*v);
        }
        break;
      case AggFn::Count: break;
    }
  }

  Value result() const {
    switch (fn) {
      case AggFn::Min:
      case AggFn::Max: return *best;
      case AggFn::Count: return static_cast<std::int64_t>(count);
      case AggFn::Sum:
        if (numeric_int) return isum;
        return static_cast<double>(isum) + fsum;
      case AggFn::Avg: return (static_cast<double>(isum) + fsum) / static_cast<double>(count);
    }
    return std::int64_t{0};
  }
};

ColumnType result_type(const AggregateSpec& agg, const Relation& rel) {
  switch (agg.fn) {
    case AggFn::Count: return ColumnType::Int;
    case AggFn::Avg: return ColumnType::Float;
    default: return rel.types[rel.require_index(agg.attribute)];
  }
}

}  // namespace

Relation group_aggregate(const Relation& rel, std::span<const std::string> grouping,
                         std::span<const AggregateSpec> aggs, ExecContext* ctx) {
  const auto gidx = indices_of(rel, grouping);
  std::vector<std::optional<std::size_t>> aidx;
  Relation out(rel.name, {grouping.begin(), grouping.end()}, {});
  for (auto i : gidx) out.types.push_back(rel.types[i]);
  for (const auto& a : aggs) {
    if (a.attribute.empty()) {
      if (a.fn != AggFn::Count) throw Error(ErrorCode::UnsupportedConstruct, "only COUNT accepts '*'");
      aidx.push_back(std::nullopt);
    } else {
      const auto i = rel.require_index(a.attribute);
      if ((a.fn == AggFn::Sum || a.fn == AggFn::Avg) && rel.types[i] == ColumnType::String)
        throw Error(ErrorCode::AggregateOverNonNumeric,
                    std::string(to_sql(a.fn)) + " over non-numeric attribute '" + a.attribute + "'");
      aidx.push_back(i);
    }
    out.schema.push_back(a.output_name.empty() ? std::string(to_sql(a.fn)) + "(" + a.attribute + ")" : a.output_name);
    out.types.push_back(result_type(a, rel));
  }
  if (grouping.empty() && rel.empty() && !aggs.empty())
    throw Error(ErrorCode::EmptyAggregate, "aggregate over empty input");

  auto fresh = [&] {
    std::vector<Accumulator> accs;
    accs.reserve(aggs.size());
    for (const auto& a : aggs) accs.push_back(Accumulator{a.fn, a.distinct});
    return accs;
  };
  // Groups are emitted in first-appearance order.
  std::unordered_map<Tuple, std::size_t, TupleHash, TupleJoinEqual> group_of;
  std::vector<Tuple> keys;
  std::vector<std::vector<Accumulator>> states;
  for (std::size_t r = 0; r < rel.rows.size(); ++r) {
    poll(ctx, r);
    const auto& row = rel.rows[r];
    auto key = key_of(row, gidx);
    auto [it, inserted] = group_of.try_emplace(key, keys.size());
    if (inserted) {
      keys.push_back(std::move(key));
      states.push_back(fresh());
    }
    auto& accs = states[it->second];
    for (std::size_t k = 0; k < aggs.size(); ++k) accs[k].add(aidx[k] ? &row[*aidx[k]] : nullptr);
  }
  if (grouping.empty() && keys.empty()) {  // no aggregates and no rows
    keys.emplace_back();
    states.push_back(fresh());
  }
  for (std::size_t g = 0; g < keys.size(); ++g) {
    Tuple t = keys[g];
    for (const auto& acc : states[g]) t.push_back(acc.result());
    out.rows.push_back(std::move(t));
  }
  if (ctx != nullptr) ctx->counter.aggregates += 1;
  return out;
}

}  // namespace smash
