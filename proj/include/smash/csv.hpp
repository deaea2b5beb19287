#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "smash/relation.hpp"

namespace smash {

/// Column name to type; read from a `<table>.schema.json` sidecar.
using SchemaOverride = std::map<std::string, ColumnType>;

/// Loads a headered CSV. Without an override, a column is int64 if every
/// value parses as an integer, float64 if every value is numeric, else string.
Relation load_csv(const std::filesystem::path& path, const std::string& table_name,
                  const std::optional<SchemaOverride>& schema = std::nullopt);
void write_csv(const Relation& rel, const std::filesystem::path& path);

SchemaOverride load_schema_sidecar(const std::filesystem::path& path);
void write_schema_sidecar(const Relation& rel, const std::filesystem::path& path);

/// Every `*.csv` in the directory becomes a table named after the file stem;
/// a matching `*.schema.json` overrides type inference.
Database load_database(const std::filesystem::path& dir);
void save_database(const Database& db, const std::filesystem::path& dir);

}  // namespace smash
