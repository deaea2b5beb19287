#include "smash/evaluate.hpp"

#include <algorithm>
#include <map>

#include "smash/error.hpp"
#include "smash/operators.hpp"

namespace smash {
namespace {

std::vector<Relation> prepare_all(const NormalizedCQ& cq, const Database& db, ExecContext* ctx) {
  const auto keep = cq.needed_classes();
  std::vector<Relation> rels;
  rels.reserve(cq.atoms.size());
  for (const auto& atom : cq.atoms) rels.push_back(prepare_atom(atom, db, &keep, ctx));
  return rels;
}

void require_tree(const JoinTree& tree, const NormalizedCQ& cq) {
  if (!satisfies_connectedness(tree, cq)) throw Error(ErrorCode::InvalidJoinTree, "tree is not a join tree of the query");
}

/// Classes of `node` that must survive the bottom-up join at that node.
std::set<ClassId> keep_after_join(const JoinTree& tree, const NormalizedCQ& cq, std::size_t node) {
  std::set<ClassId> keep = cq.output_classes();
  if (tree.parent[node]) {
    const auto& parent = cq.atoms[*tree.parent[node]];
    for (auto c : cq.atoms[node].classes())
      if (parent.has_class(c)) keep.insert(c);
  }
  return keep;
}

Relation project_onto(const Relation& rel, const std::set<ClassId>& keep, ExecContext* ctx) {
  std::vector<std::string> attrs;
  for (const auto& a : rel.schema)
    for (auto c : keep)
      if (a == class_column(c)) attrs.push_back(a);
  if (attrs.size() == rel.schema.size()) return rel;
  return project(rel, attrs, ctx);
}

}  // namespace

Relation prepare_atom(const Atom& atom, const Database& db, const std::set<ClassId>* keep, ExecContext* ctx) {
  const auto& base = db.get(atom.table);
  Relation filtered = apply_filter(base, atom.filters, ctx);
  // Same-class attributes inside one atom must agree.
  std::vector<std::pair<std::size_t, std::size_t>> equalities;
  std::map<ClassId, std::size_t> first;
  std::vector<std::size_t> src;
  std::vector<ClassId> cls;
  for (const auto& [attr, c] : atom.columns) {
    const auto idx = filtered.require_index(attr);
    auto [it, inserted] = first.try_emplace(c, idx);
    if (!inserted) {
      equalities.emplace_back(it->second, idx);
    } else if (keep == nullptr || keep->count(c)) {
      src.push_back(idx);
      cls.push_back(c);
    }
  }
  Relation out(atom.alias, {}, {});
  for (std::size_t k = 0; k < src.size(); ++k) {
    out.schema.push_back(class_column(cls[k]));
    out.types.push_back(filtered.types[src[k]]);
  }
  out.rows.reserve(filtered.size());
  for (std::size_t r = 0; r < filtered.rows.size(); ++r) {
    if (ctx != nullptr && r % 4096 == 0) ctx->check_deadline();
    const auto& row = filtered.rows[r];
    bool ok = true;
    for (const auto& [a, b] : equalities) ok = ok && join_equal(row[a], row[b]);
    if (!ok) continue;
    Tuple t;
    t.reserve(src.size());
    for (auto i : src) t.push_back(row[i]);
    out.rows.push_back(std::move(t));
  }
  return out;
}

Relation finalize_output(const Relation& joined, const OutputShape& shape, ExecContext* ctx) {
  Relation out("result", {}, {});
  if (shape.aggregate) {
    std::vector<std::string> grouping;
    for (auto g : shape.group_by) grouping.push_back(class_column(g));
    std::vector<AggregateSpec> aggs;
    std::vector<std::size_t> position;  // output column -> grouped column
    for (const auto& o : shape.items) {
      if (o.aggregate) {
        position.push_back(grouping.size() + aggs.size());
        aggs.push_back({o.fn, o.cls ? class_column(*o.cls) : std::string{}, o.distinct, o.label});
      } else {
        const auto g = std::find(shape.group_by.begin(), shape.group_by.end(), *o.cls) - shape.group_by.begin();
        position.push_back(static_cast<std::size_t>(g));
      }
    }
    const auto grouped = group_aggregate(joined, grouping, aggs, ctx);
    for (std::size_t k = 0; k < shape.items.size(); ++k) {
      out.schema.push_back(shape.items[k].label);
      out.types.push_back(grouped.types[position[k]]);
    }
    for (const auto& row : grouped.rows) {
      Tuple t;
      for (auto p : position) t.push_back(row[p]);
      out.rows.push_back(std::move(t));
    }
    return out;
  }
  std::vector<std::size_t> idx;
  for (const auto& o : shape.items) {
    idx.push_back(joined.require_index(class_column(*o.cls)));
    out.schema.push_back(o.label);
    out.types.push_back(joined.types[idx.back()]);
  }
  out.rows.reserve(joined.size());
  for (std::size_t r = 0; r < joined.rows.size(); ++r) {
    if (ctx != nullptr && r % 4096 == 0) ctx->check_deadline();
    Tuple t;
    t.reserve(idx.size());
    for (auto i : idx) t.push_back(joined.rows[r][i]);
    out.rows.push_back(std::move(t));
  }
  return out;
}

Relation evaluate_baseline(const NormalizedCQ& cq, const Database& db, ExecContext* ctx) {
  auto rels = prepare_all(cq, db, ctx);
  Relation acc = std::move(rels.front());
  for (std::size_t i = 1; i < rels.size(); ++i) acc = natural_join(acc, rels[i], ctx);
  return finalize_output(acc, cq.output_shape(), ctx);
}

namespace {

std::vector<Relation> bottom_up_semijoins(const JoinTree& tree, std::vector<Relation> rels, ExecContext* ctx) {
  for (auto node : tree.post_order())
    for (auto child : tree.children[node]) rels[node] = semi_join(rels[node], rels[child], ctx);
  return rels;
}

std::vector<Relation> top_down_semijoins(const JoinTree& tree, std::vector<Relation> rels, ExecContext* ctx) {
  for (auto node : tree.pre_order())
    for (auto child : tree.children[node]) rels[child] = semi_join(rels[child], rels[node], ctx);
  return rels;
}

}  // namespace

std::vector<Relation> full_reduce(const JoinTree& tree, const NormalizedCQ& cq, const Database& db,
                                  ExecContext* ctx) {
  require_tree(tree, cq);
  auto rels = bottom_up_semijoins(tree, prepare_all(cq, db, ctx), ctx);
  return top_down_semijoins(tree, std::move(rels), ctx);
}

Relation evaluate_yannakakis(const JoinTree& tree, const NormalizedCQ& cq, const Database& db, ExecContext* ctx) {
  require_tree(tree, cq);
  auto rels = bottom_up_semijoins(tree, prepare_all(cq, db, ctx), ctx);
  if (tree.oma) return finalize_output(rels[tree.root], cq.output_shape(), ctx);
  rels = top_down_semijoins(tree, std::move(rels), ctx);
  for (auto node : tree.post_order()) {
    for (auto child : tree.children[node]) rels[node] = natural_join(rels[node], rels[child], ctx);
    auto keep = keep_after_join(tree, cq, node);
    if (!tree.children[node].empty() || tree.parent[node]) rels[node] = project_onto(rels[node], keep, ctx);
  }
  return finalize_output(rels[tree.root], cq.output_shape(), ctx);
}

}  // namespace smash
