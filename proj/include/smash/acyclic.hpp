#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "smash/normalize.hpp"

namespace smash {

struct HyperEdge {
  std::size_t atom = 0;
  std::set<ClassId> vertices;
  friend bool operator==(const HyperEdge&, const HyperEdge&) = default;
};

struct Hypergraph {
  std::set<ClassId> vertices;
  std::vector<HyperEdge> edges;
};

/// One edge removed by the reduction. The final survivor has no witness.
struct Ear {
  std::size_t atom = 0;
  std::optional<std::size_t> witness;
};

struct AcyclicityResult {
  bool acyclic = false;
  /// Removal order; the last entry is the surviving edge when acyclic.
  std::vector<Ear> ears;
  /// Edges left when the reduction got stuck (empty when acyclic).
  std::vector<HyperEdge> residual;
};

enum class OmaFailure { NotGuarded, NotSetSafe, NotAggregate };
const char* to_string(OmaFailure f);

struct OmaResult {
  bool is_0ma = false;
  std::optional<std::size_t> guard;
  std::optional<OmaFailure> failure_reason;
};

/// Rooted tree over the atoms of a query (node id == atom index).
struct JoinTree {
  std::size_t root = 0;
  std::vector<std::optional<std::size_t>> parent;
  /// Children in construction order.
  std::vector<std::vector<std::size_t>> children;
  /// Construction rank of each node; siblings are kept sorted by it.
  std::vector<std::size_t> rank;
  bool oma = false;
  std::optional<std::size_t> guard;

  std::size_t size() const { return parent.size(); }
  bool is_leaf(std::size_t node) const { return children[node].empty(); }
  /// Maximal root-to-leaf distance in edges.
  std::size_t depth() const;
  /// Children before parents; siblings in construction order.
  std::vector<std::size_t> post_order() const;
  /// Parents before children; siblings in construction order.
  std::vector<std::size_t> pre_order() const;
  /// Path between two nodes, both ends included.
  std::vector<std::size_t> path(std::size_t a, std::size_t b) const;
};

Hypergraph build_hypergraph(const NormalizedCQ& cq);

/// GYO reduction in passes. Each pass drops the vertices that occur in a
/// single edge, then scans the edges lowest id first and removes every edge
/// contained in another one still present (its witness is the containing
/// edge with the highest id).
AcyclicityResult gyo_reduce(const Hypergraph& hg);

OmaResult classify_0ma(const NormalizedCQ& cq);

/// Parent of each ear is its witness. Children are ordered by reverse
/// removal order. A 0MA query is re-rooted at its guard. Throws
/// InvalidJoinTree if the result violates the connectedness condition.
JoinTree build_join_tree(const AcyclicityResult& gyo, const NormalizedCQ& cq, const OmaResult& oma);

/// Convenience pipeline: hypergraph, GYO, 0MA classification, join tree.
/// Throws CyclicQuery for cyclic queries.
JoinTree make_join_tree(const NormalizedCQ& cq);

/// The tree exactly as the reduction leaves it: rooted at the last
/// surviving edge, never re-rooted at a guard. The oma flag and guard are
/// still filled in. Feature extraction reads this tree; evaluation must
/// use make_join_tree.
JoinTree make_reduction_tree(const NormalizedCQ& cq);

/// Checks tree shape and, for every class, that the nodes containing it
/// form a connected subtree.
bool satisfies_connectedness(const JoinTree& tree, const NormalizedCQ& cq);

JoinTree reroot(const JoinTree& tree, std::size_t new_root);

std::string join_tree_text(const JoinTree& tree, const NormalizedCQ& cq);
nlohmann::ordered_json join_tree_json(const JoinTree& tree, const NormalizedCQ& cq);

}  // namespace smash
