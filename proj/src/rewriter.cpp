#include "smash/rewriter.hpp"

#include <map>

#include "smash/error.hpp"
#include "smash/evaluate.hpp"
#include "smash/operators.hpp"

namespace smash {
namespace {

std::string label(std::size_t node) { return "E" + std::to_string(node + 1); }

std::string join_list(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string agg_text(const OutputItem& o, const std::string& column) {
  std::string out = to_sql(o.fn);
  if (!o.cls) return out + "(*)";
  return out + "(" + (o.distinct ? "DISTINCT " : "") + column + ")";
}

class Builder {
 public:
  Builder(const JoinTree& tree, const NormalizedCQ& cq, const RewriteOptions& options)
      : tree_(tree), cq_(cq), options_(options), create_table_(options.unlogged ? "CREATE UNLOGGED TABLE " : "CREATE TABLE ") {}

  StatementSequence build() {
    const auto root_art = bottom_up(tree_.root);
    if (tree_.oma) {
      add(Statement::Kind::FinalSelect, "", "SELECT * FROM " + root_art,
          {StructuralForm::Op::Select, {}, root_art, {}, {}, std::nullopt});
    } else {
      reduced_[tree_.root] = root_art;
      for (auto node : tree_.pre_order())
        for (auto child : tree_.children[node]) top_down(child, node);
      const auto joined = join_up(tree_.root);
      final_select(joined);
    }
    if (options_.with_drops) drops();
    return std::move(seq_);
  }

 private:
  void add(Statement::Kind kind, std::string name, std::string sql, StructuralForm form) {
    seq_.statements.push_back({kind, std::move(name), std::move(sql), std::move(form)});
  }

  /// Column type of `attr` in the atom's base table, if a database is known.
  bool needs_cast(const Atom& atom, const Predicate& p) const {
    if (options_.db == nullptr || std::holds_alternative<std::string>(p.literal)) return false;
    if (!options_.db->contains(atom.table)) return false;
    const auto& rel = options_.db->get(atom.table);
    const auto i = rel.index_of(p.attribute);
    return i && rel.types[*i] == ColumnType::String;
  }

  std::string view(std::size_t node) {
    Atom atom = cq_.atoms[node];
    const auto& t = atom.table;
    std::vector<std::string> conds;
    for (auto& f : atom.filters) {
      std::string col = t + "." + f.attribute;
      if (needs_cast(atom, f)) {
        f.cast_to_number = true;
        col = "CAST(" + col + (std::holds_alternative<double>(f.literal) ? " AS DOUBLE)" : " AS INTEGER)");
      }
      conds.push_back(col + " " + to_sql(f.op) + " " + to_sql_literal(f.literal));
    }
    std::map<ClassId, std::string> first;
    for (const auto& [attr, c] : atom.columns) {
      auto [it, inserted] = first.try_emplace(c, attr);
      if (!inserted) conds.push_back(t + "." + it->second + " = " + t + "." + attr);
    }
    const auto name = label(node);
    std::string sql = "CREATE VIEW " + name + " AS SELECT *\nFROM " + t + " AS " + t;
    if (!conds.empty()) sql += "\nWHERE " + join_list(conds, "\n  AND ");
    std::set<ClassId> keep;
    const auto needed = cq_.needed_classes();
    for (auto c : atom.classes())
      if (needed.count(c)) keep.insert(c);
    add(Statement::Kind::CreateView, name, std::move(sql), {StructuralForm::Op::Scan, std::move(atom), "", "", keep, std::nullopt});
    return name;
  }

  /// Equality conditions between the original columns of two atoms'
  /// artifacts over their shared classes.
  std::vector<std::string> link(std::size_t a, const std::string& a_name, std::size_t b, const std::string& b_name) const {
    std::vector<std::string> conds;
    for (auto c : cq_.atoms[a].classes())
      if (cq_.atoms[b].has_class(c))
        conds.push_back(a_name + "." + *cq_.atoms[a].attribute_of(c) + "=" + b_name + "." + *cq_.atoms[b].attribute_of(c));
    return conds;
  }

  static std::string exists(const std::string& partner, const std::vector<std::string>& conds) {
    std::string sql = "EXISTS (SELECT 1\n  FROM " + partner;
    if (!conds.empty()) sql += "\n  WHERE " + join_list(conds, " AND ");
    return sql + ")";
  }

  /// SELECT list and GROUP BY of the 0MA aggregate over the root's columns.
  std::pair<std::string, std::string> aggregate_clause() const {
    const auto& atom = cq_.atoms[tree_.root];
    std::vector<std::string> items;
    for (std::size_t i = 0; i < cq_.output.size(); ++i) {
      const auto& o = cq_.output[i];
      const auto col = o.cls ? *atom.attribute_of(*o.cls) : std::string();
      items.push_back(o.aggregate ? agg_text(o, col) + " AS EXPR$" + std::to_string(i) : col);
    }
    std::vector<std::string> groups;
    for (auto c : cq_.group_by) groups.push_back(*atom.attribute_of(c));
    return {join_list(items, ", "), groups.empty() ? "" : "\nGROUP BY " + join_list(groups, ", ")};
  }

  /// Phase 1: returns the artifact holding `node` reduced by its subtree.
  std::string bottom_up(std::size_t node) {
    std::string acc = view(node);
    const bool agg_here = tree_.oma && node == tree_.root;
    const auto& kids = tree_.children[node];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto child_art = bottom_up(kids[i]);
      art_[kids[i]] = child_art;
      const auto name = acc + child_art;
      const bool last = i + 1 == kids.size();
      std::string select = "SELECT *";
      std::string group;
      std::optional<OutputShape> shape;
      if (agg_here && last) {
        auto [items, g] = aggregate_clause();
        select = "SELECT " + items;
        group = g;
        shape = cq_.output_shape();
      }
      add(Statement::Kind::CreateTable, name,
          create_table_ + name + " AS " + select + "\nFROM " + acc + " WHERE " + exists(child_art, link(node, acc, kids[i], child_art)) + group,
          {StructuralForm::Op::SemiJoin, std::nullopt, acc, child_art, {}, shape});
      acc = name;
    }
    if (agg_here && kids.empty()) {
      const auto name = acc + "_agg";
      auto [items, g] = aggregate_clause();
      add(Statement::Kind::CreateTable, name, create_table_ + name + " AS SELECT " + items + "\nFROM " + acc + g,
          {StructuralForm::Op::Aggregate, std::nullopt, acc, "", {}, cq_.output_shape()});
      acc = name;
    }
    return acc;
  }

  /// Phase 2: reduces `child` by its already reduced parent.
  void top_down(std::size_t child, std::size_t parent) {
    const auto& src = art_.at(child);
    auto name = src + label(parent);
    while (taken(name)) name += "_td";
    add(Statement::Kind::CreateTable, name,
        create_table_ + name + " AS SELECT *\nFROM " + src + " WHERE " + exists(reduced_.at(parent), link(child, src, parent, reduced_.at(parent))),
        {StructuralForm::Op::SemiJoin, std::nullopt, src, reduced_.at(parent), {}, std::nullopt});
    reduced_[child] = name;
  }

  bool taken(const std::string& name) const {
    for (const auto& s : seq_.statements)
      if (s.name == name) return true;
    return false;
  }

  /// Classes to keep at `node` once the children from index `next` on are
  /// still to be joined.
  std::set<ClassId> keep_at(std::size_t node, std::size_t next, const std::set<ClassId>& present) const {
    std::set<ClassId> want = cq_.output_classes();
    const auto& atom = cq_.atoms[node];
    for (auto c : atom.classes()) {
      bool shared = tree_.parent[node] && cq_.atoms[*tree_.parent[node]].has_class(c);
      for (std::size_t j = next; j < tree_.children[node].size() && !shared; ++j)
        shared = cq_.atoms[tree_.children[node][j]].has_class(c);
      if (shared) want.insert(c);
    }
    std::set<ClassId> keep;
    for (auto c : want)
      if (present.count(c)) keep.insert(c);
    return keep;
  }

  static std::string select_classes(const std::set<ClassId>& keep, const std::map<ClassId, std::string>& source) {
    if (keep.empty()) return "SELECT 1 AS one";
    std::vector<std::string> items;
    for (auto c : keep) items.push_back(source.at(c) + " AS " + class_column(c));
    return "SELECT " + join_list(items, ", ");
  }

  /// Phase 3: returns the artifact with the joined subtree of `node`.
  std::string join_up(std::size_t node) {
    const auto& atom = cq_.atoms[node];
    const auto& src = reduced_.at(node);
    const auto needed = cq_.needed_classes();
    std::set<ClassId> present;
    for (auto c : atom.classes())
      if (needed.count(c)) present.insert(c);
    auto keep = keep_at(node, 0, present);
    std::map<ClassId, std::string> cols;
    for (auto c : keep) cols[c] = src + "." + *atom.attribute_of(c);
    std::string acc = "J" + label(node);
    add(Statement::Kind::CreateTable, acc, create_table_ + acc + " AS " + select_classes(keep, cols) + "\nFROM " + src,
        {StructuralForm::Op::Project, std::nullopt, src, "", keep, std::nullopt});
    present = keep;
    std::string seq_label = label(node);
    const auto& kids = tree_.children[node];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto right = join_up(kids[i]);
      const auto& right_cols = columns_[right];
      std::set<ClassId> both = present;
      both.insert(right_cols.begin(), right_cols.end());
      keep = keep_at(node, i + 1, both);
      std::map<ClassId, std::string> pick;
      std::vector<std::string> conds;
      for (auto c : both) pick[c] = (present.count(c) ? acc : right) + "." + class_column(c);
      for (auto c : present)
        if (right_cols.count(c)) conds.push_back(acc + "." + class_column(c) + "=" + right + "." + class_column(c));
      seq_label += right.substr(1);
      const auto name = "J" + seq_label;
      std::string sql = create_table_ + name + " AS " + select_classes(keep, pick) + "\nFROM " + acc + ", " + right;
      if (!conds.empty()) sql += "\nWHERE " + join_list(conds, " AND ");
      add(Statement::Kind::CreateTable, name, std::move(sql), {StructuralForm::Op::Join, std::nullopt, acc, right, keep, std::nullopt});
      acc = name;
      present = keep;
    }
    columns_[acc] = present;
    return acc;
  }

  void final_select(const std::string& source) {
    std::vector<std::string> items;
    for (std::size_t i = 0; i < cq_.output.size(); ++i) {
      const auto& o = cq_.output[i];
      const auto col = o.cls ? source + "." + class_column(*o.cls) : std::string();
      items.push_back(o.aggregate ? agg_text(o, col) + " AS EXPR$" + std::to_string(i) : col);
    }
    std::string sql = "SELECT " + join_list(items, ", ") + "\nFROM " + source;
    if (!cq_.group_by.empty()) {
      std::vector<std::string> groups;
      for (auto c : cq_.group_by) groups.push_back(source + "." + class_column(c));
      sql += "\nGROUP BY " + join_list(groups, ", ");
    }
    add(Statement::Kind::FinalSelect, "", std::move(sql),
        {StructuralForm::Op::Select, std::nullopt, source, "", {}, cq_.output_shape()});
  }

  void drops() {
    const auto n = seq_.statements.size();
    for (std::size_t i = n; i-- > 0;) {
      const auto s = seq_.statements[i];
      if (s.kind == Statement::Kind::FinalSelect) continue;
      const bool is_view = s.kind == Statement::Kind::CreateView;
      add(Statement::Kind::Drop, s.name, std::string(is_view ? "DROP VIEW IF EXISTS " : "DROP TABLE IF EXISTS ") + s.name,
          {StructuralForm::Op::Drop, std::nullopt, s.name, "", {}, std::nullopt});
    }
  }

  const JoinTree& tree_;
  const NormalizedCQ& cq_;
  const RewriteOptions& options_;
  const std::string create_table_;
  StatementSequence seq_;
  std::map<std::size_t, std::string> art_;
  std::map<std::size_t, std::string> reduced_;
  std::map<std::string, std::set<ClassId>> columns_;
};

Relation keep_classes(const Relation& rel, const std::set<ClassId>& keep, ExecContext* ctx) {
  std::vector<std::string> attrs;
  for (auto c : keep)
    if (rel.index_of(class_column(c))) attrs.push_back(class_column(c));
  return project(rel, attrs, ctx);
}

}  // namespace

std::string StatementSequence::script() const {
  std::string out;
  for (const auto& s : statements) out += s.sql + ";\n\n";
  return out;
}

StatementSequence rewrite(const JoinTree& tree, const NormalizedCQ& cq, const RewriteOptions& options) {
  if (!satisfies_connectedness(tree, cq)) throw Error(ErrorCode::InvalidJoinTree, "tree is not a join tree of the query");
  return Builder(tree, cq, options).build();
}

Relation interpret_sequence(const StatementSequence& seq, const Database& db, ExecContext* ctx) {
  std::map<std::string, Relation> names;
  auto get = [&](const std::string& name) -> const Relation& {
    auto it = names.find(name);
    if (it == names.end()) throw Error(ErrorCode::UndefinedIntermediate, "'" + name + "' is not defined");
    return it->second;
  };
  std::optional<Relation> result;
  for (const auto& s : seq.statements) {
    const auto& f = s.form;
    Relation out;
    switch (f.op) {
      case StructuralForm::Op::Scan:
        if (!f.atom) throw Error(ErrorCode::UndefinedIntermediate, "scan of '" + s.name + "' has no atom");
        out = prepare_atom(*f.atom, db, &f.keep, ctx);
        break;
      case StructuralForm::Op::SemiJoin:
        out = semi_join(get(f.source), get(f.partner), ctx);
        if (f.shape) out = finalize_output(out, *f.shape, ctx);
        break;
      case StructuralForm::Op::Project:
        out = keep_classes(get(f.source), f.keep, ctx);
        break;
      case StructuralForm::Op::Join:
        out = keep_classes(natural_join(get(f.source), get(f.partner), ctx), f.keep, ctx);
        break;
      case StructuralForm::Op::Aggregate:
      case StructuralForm::Op::Select:
        out = f.shape ? finalize_output(get(f.source), *f.shape, ctx) : get(f.source);
        break;
      case StructuralForm::Op::Drop:
        if (names.erase(f.source) == 0) throw Error(ErrorCode::UndefinedIntermediate, "'" + f.source + "' is not defined");
        continue;
    }
    if (s.kind == Statement::Kind::FinalSelect) {
      result = std::move(out);
    } else {
      if (names.count(s.name)) throw Error(ErrorCode::UndefinedIntermediate, "'" + s.name + "' is defined twice");
      names.emplace(s.name, std::move(out));
    }
  }
  if (!result) throw Error(ErrorCode::UndefinedIntermediate, "sequence has no final SELECT");
  return std::move(*result);
}

}  // namespace smash
