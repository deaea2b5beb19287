#include "smash/workload_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "smash/error.hpp"

namespace smash {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
}

std::vector<QueryFile> read_query_files(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& e : std::filesystem::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".sql") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<QueryFile> out;
  for (const auto& f : files) out.push_back({f.stem().string(), read_text(f)});
  return out;
}

void parse_query_files(const std::vector<QueryFile>& files, std::vector<std::string>& ids,
                       std::vector<QuerySpec>& queries) {
  for (const auto& f : files) {
    try {
      queries.push_back(parse_query(f.sql));
    } catch (const Error& e) {
      throw Error(e.code(), f.id + ": " + e.what());
    }
    ids.push_back(f.id);
  }
}

void write_query_files(const std::filesystem::path& dir, const std::vector<std::string>& ids,
                       const std::vector<QuerySpec>& queries) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < ids.size(); ++i) write_text(dir / (ids[i] + ".sql"), to_sql(queries[i]) + "\n");
}

}  // namespace smash
