#include "smash/estimator.hpp"

#include <algorithm>
#include <unordered_set>

#include "smash/error.hpp"
#include "smash/operators.hpp"

namespace smash {
namespace {

struct ValueHash {
  std::size_t operator()(const Value& v) const { return hash_value(v); }
};
struct ValueEq {
  bool operator()(const Value& a, const Value& b) const { return join_equal(a, b); }
};

std::size_t distinct_count(const Relation& rel, std::size_t column) {
  std::unordered_set<Value, ValueHash, ValueEq> seen;
  seen.reserve(rel.size());
  for (const auto& row : rel.rows) seen.insert(row[column]);
  return seen.size();
}

}  // namespace

StatsCatalog StatsCatalog::analyze(const Database& db) {
  StatsCatalog out;
  for (const auto& [name, rel] : db.tables) {
    TableStats ts;
    ts.rows = rel.size();
    for (std::size_t c = 0; c < rel.arity(); ++c) ts.distinct[rel.schema[c]] = distinct_count(rel, c);
    out.tables[name] = std::move(ts);
  }
  return out;
}

std::size_t count_filtered_rows(const Atom& atom, const Database& db) {
  const auto& rel = db.get(atom.table);
  std::vector<std::size_t> idx;
  for (const auto& p : atom.filters) {
    const auto i = rel.require_index(p.attribute);
    check_predicate_type(p, rel.types[i]);
    idx.push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> equalities;
  std::vector<std::pair<ClassId, std::size_t>> first;
  for (const auto& [attr, c] : atom.columns) {
    const auto i = rel.require_index(attr);
    auto it = std::find_if(first.begin(), first.end(), [c](const auto& p) { return p.first == c; });
    if (it == first.end()) {
      first.emplace_back(c, i);
    } else {
      equalities.emplace_back(it->second, i);
    }
  }
  if (idx.empty() && equalities.empty()) return rel.size();
  std::size_t n = 0;
  for (const auto& row : rel.rows) {
    bool keep = true;
    for (std::size_t k = 0; k < idx.size() && keep; ++k)
      keep = predicate_holds(atom.filters[k], row[idx[k]]);
    for (const auto& [a, b] : equalities) keep = keep && join_equal(row[a], row[b]);
    n += keep ? 1 : 0;
  }
  return n;
}

EstimateSet estimate_cardinalities(const NormalizedCQ& cq, const Database& db, const StatsCatalog* stats) {
  EstimateSet est;
  const auto joins = cq.join_classes();
  auto table_ndv = [&](const Atom& atom, const std::string& attr) -> double {
    if (stats != nullptr) {
      auto t = stats->tables.find(atom.table);
      if (t != stats->tables.end()) {
        auto d = t->second.distinct.find(attr);
        if (d != t->second.distinct.end()) return static_cast<double>(d->second);
      }
    }
    const auto& rel = db.get(atom.table);
    return static_cast<double>(distinct_count(rel, rel.require_index(attr)));
  };

  std::vector<std::map<ClassId, double>> ndv(cq.atoms.size());
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    const auto& atom = cq.atoms[i];
    const auto rows = static_cast<double>(count_filtered_rows(atom, db));
    est.single_table_rows.push_back(rows);
    for (auto c : atom.classes()) {
      if (!joins.count(c)) continue;
      ndv[i][c] = std::min(table_ndv(atom, *atom.attribute_of(c)), rows);
    }
  }

  if (!cq.atoms.empty()) {
    double acc_rows = est.single_table_rows.front();
    auto acc_ndv = ndv.front();
    for (std::size_t i = 1; i < cq.atoms.size(); ++i) {
      const double rows = est.single_table_rows[i];
      double out = acc_rows * rows;
      for (const auto& [c, d] : ndv[i]) {
        auto it = acc_ndv.find(c);
        if (it == acc_ndv.end()) continue;
        const double denom = std::max(it->second, d);
        out = denom > 0 ? out / denom : 0.0;
      }
      for (const auto& [c, d] : ndv[i]) {
        auto it = acc_ndv.find(c);
        acc_ndv[c] = it == acc_ndv.end() ? d : std::min(it->second, d);
      }
      for (auto& [c, d] : acc_ndv) d = std::min(d, std::max(out, 1.0));
      est.join_rows.push_back(out);
      acc_rows = out;
    }
  }
  for (double r : est.single_table_rows) est.total_cost += r;
  for (double r : est.join_rows) est.total_cost += r;
  return est;
}

}  // namespace smash
