#pragma once

#include <cstddef>
#include <string>

#include "smash/relation.hpp"

namespace smash {

/// Boundary for running statement sequences on an external database
/// system. The tool ships no implementation; the in-memory engine is used
/// instead.
class DbmsAdapter {
 public:
  virtual ~DbmsAdapter() = default;
  /// Runs a statement that returns no rows; returns the affected row count.
  virtual std::size_t execute(const std::string& sql) = 0;
  /// Runs a query and returns its rows.
  virtual Relation query(const std::string& sql) = 0;
};

}  // namespace smash
