#pragma once

#include <set>
#include <vector>

#include "smash/acyclic.hpp"
#include "smash/normalize.hpp"
#include "smash/relation.hpp"

namespace smash {

/// Preparatory step for one atom: filters the base table, enforces
/// equalities between attributes of the same class, and projects onto the
/// kept classes renamed to class columns. A null `keep` keeps every class.
Relation prepare_atom(const Atom& atom, const Database& db, const std::set<ClassId>* keep,
                      ExecContext* ctx = nullptr);

/// Grouping/aggregation or projection onto the query's output, columns in
/// SELECT order and labelled as written in the query.
Relation finalize_output(const Relation& joined, const OutputShape& shape, ExecContext* ctx = nullptr);

/// Conventional plan: filters, left-deep natural joins in FROM order, then
/// grouping/aggregation or projection.
Relation evaluate_baseline(const NormalizedCQ& cq, const Database& db, ExecContext* ctx = nullptr);

/// Per-node relations after the bottom-up and top-down semi-join passes.
std::vector<Relation> full_reduce(const JoinTree& tree, const NormalizedCQ& cq, const Database& db,
                                  ExecContext* ctx = nullptr);

/// Yannakakis evaluation over the tree. 0MA trees stop after the bottom-up
/// semi-join pass and aggregate the root relation.
Relation evaluate_yannakakis(const JoinTree& tree, const NormalizedCQ& cq, const Database& db,
                             ExecContext* ctx = nullptr);

}  // namespace smash
