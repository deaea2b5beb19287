#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smash/query.hpp"

namespace smash {

struct QueryFile {
  std::string id;  // file stem
  std::string sql;
};

/// Every `*.sql` file of a directory, sorted by name, or the single file.
std::vector<QueryFile> read_query_files(const std::filesystem::path& path);

/// Parses each file; throws on the first malformed query, naming the file.
void parse_query_files(const std::vector<QueryFile>& files, std::vector<std::string>& ids,
                       std::vector<QuerySpec>& queries);

void write_query_files(const std::filesystem::path& dir, const std::vector<std::string>& ids,
                       const std::vector<QuerySpec>& queries);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace smash
