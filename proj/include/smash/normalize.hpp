#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "smash/query.hpp"

namespace smash {

/// Equivalence class of attributes merged by equi-join conditions. After
/// normalization every class becomes one natural-join attribute.
using ClassId = int;

/// Engine-side attribute name of a class ("c<k>").
std::string class_column(ClassId id);

struct Atom {
  std::string alias;
  std::string table;
  /// Original attribute name to class, in attribute order.
  std::vector<std::pair<std::string, ClassId>> columns;
  /// Single-table filters over original attribute names.
  std::vector<Predicate> filters;

  /// Distinct classes in column order.
  std::vector<ClassId> classes() const;
  bool has_class(ClassId c) const;
  /// First original attribute mapped to the class.
  std::optional<std::string> attribute_of(ClassId c) const;
};

struct OutputItem {
  bool aggregate = false;
  AggFn fn = AggFn::Min;
  bool distinct = false;
  std::optional<ClassId> cls;  // empty for COUNT(*)
  std::string alias;           // alias the query named, empty for COUNT(*)
  std::string label;
};

/// What the query returns: aggregates with grouping, or a projection.
struct OutputShape {
  std::vector<OutputItem> items;
  std::vector<ClassId> group_by;
  bool aggregate = false;
};

/// Conjunctive query over natural joins: atoms whose attributes are renamed
/// to join classes, per-atom filters, and an output spec over classes.
struct NormalizedCQ {
  std::vector<Atom> atoms;
  std::vector<std::string> class_names;  // representative "alias.attr"
  std::vector<OutputItem> output;
  std::vector<ClassId> group_by;
  bool aggregate = false;

  std::size_t class_count() const { return class_names.size(); }
  OutputShape output_shape() const { return {output, group_by, aggregate}; }
  /// Indices of atoms containing the class, ascending.
  std::vector<std::size_t> atoms_with(ClassId c) const;
  /// Classes occurring in at least two atoms.
  std::set<ClassId> join_classes() const;
  /// Classes referenced by the output (grouping, aggregated, projected).
  std::set<ClassId> output_classes() const;
  /// Classes an evaluator must keep after the preparatory projection.
  std::set<ClassId> needed_classes() const;
  std::size_t filter_count() const;
  /// Sum over join classes of (#atoms containing it - 1).
  std::size_t join_count() const;

  friend bool operator==(const NormalizedCQ&, const NormalizedCQ&) = default;
};

bool operator==(const Atom& a, const Atom& b);
bool operator==(const OutputItem& a, const OutputItem& b);

/// Union-find over join conditions. With a catalog every table attribute
/// receives a class (schema order); without one only referenced attributes
/// do, in lexicographic order. Class ids follow FROM order, then attribute
/// order.
NormalizedCQ normalize(const QuerySpec& spec, const Catalog* catalog = nullptr);

/// Re-expresses a normalized query as a spec (one equality chain per class).
QuerySpec to_spec(const NormalizedCQ& cq);

}  // namespace smash
