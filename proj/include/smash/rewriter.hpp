#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smash/acyclic.hpp"
#include "smash/normalize.hpp"
#include "smash/relation.hpp"

namespace smash {

/// Engine-level meaning of one statement. Intermediates are held with class
/// columns, so semi-joins and joins are natural on shared classes.
struct StructuralForm {
  enum class Op { Scan, SemiJoin, Project, Join, Aggregate, Select, Drop };
  Op op = Op::Scan;
  /// Scan: the atom to read (filters may carry CAST flags).
  std::optional<Atom> atom;
  std::string source;
  std::string partner;
  /// Scan/Project/Join: classes kept in the result.
  std::set<ClassId> keep;
  /// SemiJoin/Aggregate/Select: output computed from the result, if any.
  std::optional<OutputShape> shape;
};

struct Statement {
  enum class Kind { CreateView, CreateTable, FinalSelect, Drop };
  Kind kind = Kind::CreateView;
  std::string name;
  std::string sql;
  StructuralForm form;
};

struct StatementSequence {
  std::vector<Statement> statements;

  /// Statements joined by ";\n\n".
  std::string script() const;
};

struct RewriteOptions {
  bool unlogged = true;
  bool with_drops = true;
  /// When set, string columns compared with numeric literals are wrapped
  /// in CAST(... AS INTEGER).
  const Database* db = nullptr;
};

/// Statement sequence forcing Yannakakis-style evaluation of `cq` along
/// `tree`: one view per atom, EXISTS semi-join tables bottom-up, and for
/// non-0MA trees top-down semi-join tables and bottom-up join tables.
StatementSequence rewrite(const JoinTree& tree, const NormalizedCQ& cq, const RewriteOptions& options = {});

/// Executes a sequence on the engine with a private namespace of
/// intermediates and returns the FinalSelect result.
Relation interpret_sequence(const StatementSequence& seq, const Database& db, ExecContext* ctx = nullptr);

}  // namespace smash
