#include "smash/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "smash/error.hpp"

namespace smash {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(std::move(cell));
  return out;
}

bool parses_int(const std::string& s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parses_float(const std::string& s) {
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    (void)std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string quote_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Relation load_csv(const std::filesystem::path& path, const std::string& table_name,
                  const std::optional<SchemaOverride>& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, path.string() + " has no header row");
  const auto header = split_csv_line(line);
  std::vector<std::vector<std::string>> cells;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = split_csv_line(line);
    if (row.size() != header.size())
      throw Error(ErrorCode::Io, path.string() + ": row " + std::to_string(cells.size() + 2) + " has " +
                                     std::to_string(row.size()) + " cells, expected " + std::to_string(header.size()));
    cells.push_back(std::move(row));
  }
  std::vector<ColumnType> types(header.size(), ColumnType::String);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (schema) {
      auto it = schema->find(header[c]);
      if (it != schema->end()) {
        types[c] = it->second;
        continue;
      }
    }
    bool all_int = true;
    bool all_num = true;
    for (const auto& row : cells) {
      all_int = all_int && parses_int(row[c]);
      all_num = all_num && (all_int || parses_float(row[c]));
      if (!all_num) break;
    }
    types[c] = all_int ? ColumnType::Int : all_num ? ColumnType::Float : ColumnType::String;
  }
  Relation rel(table_name, header, types);
  rel.rows.reserve(cells.size());
  for (const auto& row : cells) {
    Tuple t;
    t.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) t.push_back(parse_cell(row[c], types[c]));
    rel.rows.push_back(std::move(t));
  }
  rel.validate();
  return rel;
}

void write_csv(const Relation& rel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (std::size_t c = 0; c < rel.schema.size(); ++c) out << (c ? "," : "") << quote_cell(rel.schema[c]);
  out << '\n';
  for (const auto& row : rel.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << quote_cell(to_text(row[c]));
    out << '\n';
  }
}

SchemaOverride load_schema_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, path.string() + ": " + e.what());
  }
  SchemaOverride out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = column_type_from_string(it.value().get<std::string>());
  return out;
}

void write_schema_sidecar(const Relation& rel, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  for (std::size_t c = 0; c < rel.schema.size(); ++c) j[rel.schema[c]] = to_string(rel.types[c]);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Database load_database(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  Database db;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (p.extension() != ".csv") continue;
    const auto name = p.stem().string();
    auto sidecar = p.parent_path() / (name + ".schema.json");
    std::optional<SchemaOverride> schema;
    if (std::filesystem::exists(sidecar)) schema = load_schema_sidecar(sidecar);
    db.add(load_csv(p, name, schema));
  }
  return db;
}

void save_database(const Database& db, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, rel] : db.tables) {
    write_csv(rel, dir / (name + ".csv"));
    write_schema_sidecar(rel, dir / (name + ".schema.json"));
  }
}

}  // namespace smash
