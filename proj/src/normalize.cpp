#include "smash/normalize.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "smash/error.hpp"

namespace smash {
namespace {

class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string class_column(ClassId id) { return "c" + std::to_string(id); }

std::vector<ClassId> Atom::classes() const {
  std::vector<ClassId> out;
  for (const auto& [attr, c] : columns)
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

bool Atom::has_class(ClassId c) const {
  return std::any_of(columns.begin(), columns.end(), [c](const auto& p) { return p.second == c; });
}

std::optional<std::string> Atom::attribute_of(ClassId c) const {
  for (const auto& [attr, cls] : columns)
    if (cls == c) return attr;
  return std::nullopt;
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.alias != b.alias || a.table != b.table || a.columns != b.columns || a.filters.size() != b.filters.size())
    return false;
  for (std::size_t i = 0; i < a.filters.size(); ++i) {
    const auto& x = a.filters[i];
    const auto& y = b.filters[i];
    if (x.attribute != y.attribute || x.op != y.op || x.literal != y.literal ||
        x.cast_to_number != y.cast_to_number)
      return false;
  }
  return true;
}

bool operator==(const OutputItem& a, const OutputItem& b) {
  return a.aggregate == b.aggregate && a.fn == b.fn && a.distinct == b.distinct && a.cls == b.cls &&
         a.alias == b.alias && a.label == b.label;
}

std::vector<std::size_t> NormalizedCQ::atoms_with(ClassId c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].has_class(c)) out.push_back(i);
  return out;
}

std::set<ClassId> NormalizedCQ::join_classes() const {
  std::set<ClassId> out;
  for (ClassId c = 0; c < static_cast<ClassId>(class_count()); ++c)
    if (atoms_with(c).size() >= 2) out.insert(c);
  return out;
}

std::set<ClassId> NormalizedCQ::output_classes() const {
  std::set<ClassId> out(group_by.begin(), group_by.end());
  for (const auto& o : output)
    if (o.cls) out.insert(*o.cls);
  return out;
}

std::set<ClassId> NormalizedCQ::needed_classes() const {
  auto out = join_classes();
  for (auto c : output_classes()) out.insert(c);
  return out;
}

std::size_t NormalizedCQ::filter_count() const {
  std::size_t n = 0;
  for (const auto& a : atoms) n += a.filters.size();
  return n;
}

std::size_t NormalizedCQ::join_count() const {
  std::size_t n = 0;
  for (auto c : join_classes()) n += atoms_with(c).size() - 1;
  return n;
}

NormalizedCQ normalize(const QuerySpec& spec, const Catalog* catalog) {
  // Collect attributes per alias in canonical order.
  std::map<std::string, std::vector<std::string>> referenced;
  auto note = [&](const AttrRef& r) {
    auto& v = referenced[r.alias];
    if (std::find(v.begin(), v.end(), r.attribute) == v.end()) v.push_back(r.attribute);
  };
  for (const auto& s : spec.select)
    if (s.ref) note(*s.ref);
  for (const auto& g : spec.group_by) note(g);
  for (const auto& j : spec.join_conds) {
    note(j.left);
    note(j.right);
  }
  for (const auto& f : spec.filters) note(f.ref);

  std::vector<std::vector<std::string>> attrs(spec.tables.size());
  for (std::size_t i = 0; i < spec.tables.size(); ++i) {
    const auto& t = spec.tables[i];
    auto ref = referenced[t.alias];
    if (catalog != nullptr && catalog->count(t.table)) {
      attrs[i] = catalog->at(t.table);
      for (const auto& a : ref)
        if (std::find(attrs[i].begin(), attrs[i].end(), a) == attrs[i].end())
          throw Error(ErrorCode::UnknownAttribute, "table '" + t.table + "' has no attribute '" + a + "'");
    } else {
      std::sort(ref.begin(), ref.end());
      attrs[i] = ref;
    }
  }

  std::map<AttrRef, std::size_t> slot;
  UnionFind uf;
  for (std::size_t i = 0; i < spec.tables.size(); ++i)
    for (const auto& a : attrs[i]) slot[{spec.tables[i].alias, a}] = uf.add();
  for (const auto& j : spec.join_conds) uf.unite(slot.at(j.left), slot.at(j.right));

  NormalizedCQ cq;
  std::map<std::size_t, ClassId> class_of_root;
  for (std::size_t i = 0; i < spec.tables.size(); ++i) {
    Atom atom;
    atom.alias = spec.tables[i].alias;
    atom.table = spec.tables[i].table;
    for (const auto& a : attrs[i]) {
      const auto root = uf.find(slot.at({atom.alias, a}));
      auto [it, inserted] = class_of_root.try_emplace(root, static_cast<ClassId>(cq.class_names.size()));
      if (inserted) cq.class_names.push_back(atom.alias + "." + a);
      atom.columns.emplace_back(a, it->second);
    }
    for (const auto& f : spec.filters)
      if (f.ref.alias == atom.alias) atom.filters.push_back({f.ref.attribute, f.op, f.literal});
    cq.atoms.push_back(std::move(atom));
  }
  auto cls = [&](const AttrRef& r) { return class_of_root.at(uf.find(slot.at(r))); };
  cq.aggregate = spec.is_aggregate();
  for (const auto& s : spec.select) {
    OutputItem o;
    o.aggregate = s.aggregate;
    o.fn = s.fn;
    o.distinct = s.distinct;
    if (s.ref) {
      o.cls = cls(*s.ref);
      o.alias = s.ref->alias;
    }
    const std::string arg = s.ref ? s.ref->str() : "*";
    o.label = s.aggregate ? std::string(to_sql(s.fn)) + "(" + (s.distinct ? "DISTINCT " : "") + arg + ")" : arg;
    cq.output.push_back(std::move(o));
  }
  for (const auto& g : spec.group_by) {
    const auto c = cls(g);
    if (std::find(cq.group_by.begin(), cq.group_by.end(), c) == cq.group_by.end()) cq.group_by.push_back(c);
  }
  return cq;
}

QuerySpec to_spec(const NormalizedCQ& cq) {
  QuerySpec q;
  std::vector<std::vector<AttrRef>> members(cq.class_count());
  for (const auto& a : cq.atoms) {
    q.tables.push_back({a.table, a.alias});
    for (const auto& [attr, c] : a.columns) members[c].push_back({a.alias, attr});
    for (const auto& f : a.filters) q.filters.push_back({{a.alias, f.attribute}, f.op, f.literal});
  }
  for (const auto& m : members)
    for (std::size_t i = 1; i < m.size(); ++i) q.join_conds.push_back({m[i - 1], m[i]});
  auto rep = [&](ClassId c) { return members[c].front(); };
  for (const auto& o : cq.output) {
    SelectEntry e;
    e.aggregate = o.aggregate;
    e.fn = o.fn;
    e.distinct = o.distinct;
    if (o.cls) {
      // Prefer the attribute named in the label so round trips keep it.
      AttrRef chosen = rep(*o.cls);
      for (const auto& m : members[*o.cls])
        if (o.label == m.str() || o.label.ends_with("(" + m.str() + ")") || o.label.ends_with(" " + m.str() + ")"))
          chosen = m;
      e.ref = chosen;
    }
    q.select.push_back(std::move(e));
  }
  for (auto g : cq.group_by) q.group_by.push_back(rep(g));
  return q;
}

}  // namespace smash
