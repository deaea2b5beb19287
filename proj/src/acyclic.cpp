#include "smash/acyclic.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "smash/error.hpp"

namespace smash {

const char* to_string(OmaFailure f) {
  switch (f) {
    case OmaFailure::NotGuarded: return "NotGuarded";
    case OmaFailure::NotSetSafe: return "NotSetSafe";
    case OmaFailure::NotAggregate: return "NotAggregate";
  }
  return "Unknown";
}

std::size_t JoinTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (auto c : children[node]) stack.emplace_back(c, d + 1);
  }
  return best;
}

std::vector<std::size_t> JoinTree::post_order() const {
  std::vector<std::size_t> out;
  auto visit = [&](auto&& self, std::size_t n) -> void {
    for (auto c : children[n]) self(self, c);
    out.push_back(n);
  };
  visit(visit, root);
  return out;
}

std::vector<std::size_t> JoinTree::pre_order() const {
  std::vector<std::size_t> out;
  auto visit = [&](auto&& self, std::size_t n) -> void {
    out.push_back(n);
    for (auto c : children[n]) self(self, c);
  };
  visit(visit, root);
  return out;
}

std::vector<std::size_t> JoinTree::path(std::size_t a, std::size_t b) const {
  auto ancestors = [&](std::size_t n) {
    std::vector<std::size_t> chain{n};
    while (parent[chain.back()]) chain.push_back(*parent[chain.back()]);
    return chain;
  };
  const auto pa = ancestors(a);
  const auto pb = ancestors(b);
  std::size_t lca = root;
  for (auto n : pa)
    if (std::find(pb.begin(), pb.end(), n) != pb.end()) {
      lca = n;
      break;
    }
  std::vector<std::size_t> out;
  for (auto n : pa) {
    out.push_back(n);
    if (n == lca) break;
  }
  std::vector<std::size_t> tail;
  for (auto n : pb) {
    if (n == lca) break;
    tail.push_back(n);
  }
  out.insert(out.end(), tail.rbegin(), tail.rend());
  return out;
}

Hypergraph build_hypergraph(const NormalizedCQ& cq) {
  Hypergraph hg;
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    HyperEdge e;
    e.atom = i;
    for (auto c : cq.atoms[i].classes()) {
      e.vertices.insert(c);
      hg.vertices.insert(c);
    }
    hg.edges.push_back(std::move(e));
  }
  return hg;
}

AcyclicityResult gyo_reduce(const Hypergraph& hg) {
  AcyclicityResult result;
  std::map<std::size_t, std::set<ClassId>> edges;
  for (const auto& e : hg.edges) edges[e.atom] = e.vertices;
  if (edges.empty()) {
    result.acyclic = true;
    return result;
  }
  for (;;) {
    if (edges.size() == 1) {
      result.ears.push_back({edges.begin()->first, std::nullopt});
      result.acyclic = true;
      return result;
    }
    bool changed = false;
    std::map<ClassId, int> occurrences;
    for (const auto& [id, vs] : edges)
      for (auto v : vs) ++occurrences[v];
    for (auto& [id, vs] : edges) {
      for (auto it = vs.begin(); it != vs.end();) {
        if (occurrences[*it] == 1) {
          it = vs.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    // One pass: every edge, lowest id first, is checked against the edges
    // still present.
    std::vector<std::size_t> ids;
    for (const auto& [id, vs] : edges) ids.push_back(id);
    for (auto id : ids) {
      if (edges.size() == 1) break;
      const auto& vs = edges.at(id);
      std::optional<std::size_t> witness;
      for (const auto& [other, ovs] : edges) {
        if (other == id) continue;
        if (std::includes(ovs.begin(), ovs.end(), vs.begin(), vs.end())) witness = other;  // keeps the highest id
      }
      if (witness) {
        result.ears.push_back({id, witness});
        edges.erase(id);
        changed = true;
      }
    }
    if (!changed) {
      result.acyclic = false;
      for (const auto& [id, vs] : edges) result.residual.push_back({id, vs});
      return result;
    }
  }
}

OmaResult classify_0ma(const NormalizedCQ& cq) {
  OmaResult r;
  if (!cq.aggregate) {
    r.failure_reason = OmaFailure::NotAggregate;
    return r;
  }
  for (const auto& o : cq.output) {
    if (!o.aggregate) continue;
    const bool set_safe = o.fn == AggFn::Min || o.fn == AggFn::Max || (o.distinct && o.cls);
    if (!set_safe) {
      r.failure_reason = OmaFailure::NotSetSafe;
      return r;
    }
  }
  const auto required = cq.output_classes();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    bool ok = true;
    for (auto c : required) ok = ok && cq.atoms[i].has_class(c);
    if (ok) candidates.push_back(i);
  }
  if (candidates.empty()) {
    r.failure_reason = OmaFailure::NotGuarded;
    return r;
  }
  // Prefer the relation the query itself names in its output.
  std::optional<std::size_t> guard;
  for (const auto& o : cq.output) {
    if (guard || o.alias.empty()) continue;
    for (auto c : candidates)
      if (cq.atoms[c].alias == o.alias) guard = c;
  }
  r.is_0ma = true;
  r.guard = guard ? *guard : candidates.front();
  return r;
}

namespace {

void sort_children(JoinTree& t) {
  for (auto& ch : t.children)
    std::sort(ch.begin(), ch.end(), [&](std::size_t a, std::size_t b) { return t.rank[a] < t.rank[b]; });
}

void validate_shape(const JoinTree& t) {
  const auto n = t.size();
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.parent[i]) ++edges;
    if ((i == t.root) == t.parent[i].has_value()) throw Error(ErrorCode::InvalidJoinTree, "root/parent mismatch");
  }
  if (n > 0 && edges != n - 1) throw Error(ErrorCode::InvalidJoinTree, "join tree does not have n-1 edges");
  if (n > 0 && t.pre_order().size() != n) throw Error(ErrorCode::InvalidJoinTree, "join tree is not connected");
}

}  // namespace

JoinTree reroot(const JoinTree& tree, std::size_t new_root) {
  JoinTree t = tree;
  std::optional<std::size_t> prev;
  std::size_t cur = new_root;
  for (;;) {
    const auto next = tree.parent[cur];
    t.parent[cur] = prev;
    if (!next) break;
    prev = cur;
    cur = *next;
  }
  t.root = new_root;
  t.children.assign(t.size(), {});
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.parent[i]) t.children[*t.parent[i]].push_back(i);
  sort_children(t);
  return t;
}

bool satisfies_connectedness(const JoinTree& tree, const NormalizedCQ& cq) {
  try {
    validate_shape(tree);
  } catch (const Error&) {
    return false;
  }
  if (tree.size() != cq.atoms.size()) return false;
  for (ClassId c = 0; c < static_cast<ClassId>(cq.class_count()); ++c) {
    // Nodes containing c are connected iff exactly one of them lacks a
    // parent that also contains c.
    int tops = 0;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (!cq.atoms[i].has_class(c)) continue;
      if (!tree.parent[i] || !cq.atoms[*tree.parent[i]].has_class(c)) ++tops;
    }
    if (tops > 1) return false;
  }
  return true;
}

JoinTree build_join_tree(const AcyclicityResult& gyo, const NormalizedCQ& cq, const OmaResult& oma) {
  if (!gyo.acyclic) throw Error(ErrorCode::CyclicQuery, "query is cyclic; no join tree exists");
  const auto n = cq.atoms.size();
  if (gyo.ears.size() != n) throw Error(ErrorCode::InvalidJoinTree, "ear ordering does not cover every atom");
  JoinTree t;
  t.parent.assign(n, std::nullopt);
  t.children.assign(n, {});
  t.rank.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ear = gyo.ears[k];
    t.rank[ear.atom] = n - 1 - k;
    if (ear.witness) {
      t.parent[ear.atom] = *ear.witness;
      t.children[*ear.witness].push_back(ear.atom);
    } else {
      t.root = ear.atom;
    }
  }
  sort_children(t);
  if (oma.is_0ma && oma.guard) t = reroot(t, *oma.guard);
  t.oma = oma.is_0ma;
  t.guard = oma.guard;
  validate_shape(t);
  if (!satisfies_connectedness(t, cq)) throw Error(ErrorCode::InvalidJoinTree, "connectedness condition violated");
  return t;
}

JoinTree make_join_tree(const NormalizedCQ& cq) {
  const auto gyo = gyo_reduce(build_hypergraph(cq));
  if (!gyo.acyclic) throw Error(ErrorCode::CyclicQuery, "query is cyclic; no join tree exists");
  return build_join_tree(gyo, cq, classify_0ma(cq));
}

JoinTree make_reduction_tree(const NormalizedCQ& cq) {
  const auto gyo = gyo_reduce(build_hypergraph(cq));
  if (!gyo.acyclic) throw Error(ErrorCode::CyclicQuery, "query is cyclic; no join tree exists");
  const auto oma = classify_0ma(cq);
  auto t = build_join_tree(gyo, cq, OmaResult{});
  t.oma = oma.is_0ma;
  t.guard = oma.guard;
  return t;
}

std::string join_tree_text(const JoinTree& tree, const NormalizedCQ& cq) {
  std::ostringstream out;
  auto visit = [&](auto&& self, std::size_t node, int indent) -> void {
    const auto& a = cq.atoms[node];
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << a.table << " (" << a.alias << ") [";
    bool first = true;
    for (auto c : a.classes()) {
      out << (first ? "" : ", ") << cq.class_names[c];
      first = false;
    }
    out << "]";
    if (tree.guard && *tree.guard == node && tree.oma) out << " guard";
    out << '\n';
    for (auto c : tree.children[node]) self(self, c, indent + 1);
  };
  visit(visit, tree.root, 0);
  return out.str();
}

nlohmann::ordered_json join_tree_json(const JoinTree& tree, const NormalizedCQ& cq) {
  nlohmann::ordered_json j;
  j["root"] = cq.atoms[tree.root].alias;
  j["oma"] = tree.oma;
  j["guard"] = tree.guard ? nlohmann::ordered_json(cq.atoms[*tree.guard].alias) : nlohmann::ordered_json(nullptr);
  j["depth"] = tree.depth();
  auto nodes = nlohmann::ordered_json::array();
  for (auto n : tree.pre_order()) {
    nlohmann::ordered_json node;
    node["node"] = cq.atoms[n].alias;
    node["table"] = cq.atoms[n].table;
    node["parent"] = tree.parent[n] ? nlohmann::ordered_json(cq.atoms[*tree.parent[n]].alias)
                                    : nlohmann::ordered_json(nullptr);
    auto attrs = nlohmann::ordered_json::array();
    for (auto c : cq.atoms[n].classes()) attrs.push_back(cq.class_names[c]);
    node["attrs"] = attrs;
    nodes.push_back(node);
  }
  j["nodes"] = nodes;
  return j;
}

}  // namespace smash
