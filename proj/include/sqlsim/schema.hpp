#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlsim/errors.hpp"
#include "sqlsim/sql_lexer.hpp"

namespace sqlsim {

struct ColumnId {
  std::size_t table = 0;
  std::size_t column = 0;
  auto operator<=>(const ColumnId&) const = default;
};

struct Column {
  std::string name;
  std::string type;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
};

/// One database's tables, columns, and keys. Immutable once constructed; the
/// constructor validates uniqueness and key references and throws FormatError.
class SchemaCatalog {
 public:
  SchemaCatalog() = default;
  SchemaCatalog(std::string db_id, std::vector<Table> tables, std::vector<ColumnId> primary_keys = {},
                std::vector<std::pair<ColumnId, ColumnId>> foreign_keys = {})
      : db_id_(std::move(db_id)),
        tables_(std::move(tables)),
        primary_keys_(std::move(primary_keys)),
        foreign_keys_(std::move(foreign_keys)) {
    column_index_.resize(tables_.size());
    for (std::size_t t = 0; t < tables_.size(); ++t) {
      const Table& table = tables_[t];
      if (table.columns.empty())
        throw FormatError(db_id_ + ": table '" + table.name + "' has no columns");
      if (!table_index_.emplace(to_lower(table.name), t).second)
        throw FormatError(db_id_ + ": duplicate table name '" + table.name + "'");
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (!column_index_[t].emplace(to_lower(table.columns[c].name), c).second)
          throw FormatError(db_id_ + ": duplicate column '" + table.columns[c].name + "' in table '" +
                            table.name + "'");
      }
    }
    for (const auto& pk : primary_keys_) check_column(pk, "primary key");
    for (const auto& [from, to] : foreign_keys_) {
      check_column(from, "foreign key");
      check_column(to, "foreign key");
    }
  }

  const std::string& db_id() const noexcept { return db_id_; }
  const std::vector<Table>& tables() const noexcept { return tables_; }
  const std::vector<ColumnId>& primary_keys() const noexcept { return primary_keys_; }
  const std::vector<std::pair<ColumnId, ColumnId>>& foreign_keys() const noexcept { return foreign_keys_; }

  std::optional<std::size_t> find_table(std::string_view name) const {
    auto it = table_index_.find(to_lower(name));
    if (it == table_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_column(std::size_t table, std::string_view name) const {
    const auto& idx = column_index_.at(table);
    auto it = idx.find(to_lower(name));
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  const Column& column(ColumnId id) const { return tables_.at(id.table).columns.at(id.column); }

 private:
  void check_column(ColumnId id, const char* what) const {
    if (id.table >= tables_.size() || id.column >= tables_[id.table].columns.size())
      throw FormatError(db_id_ + ": " + what + " references a missing column");
  }

  std::string db_id_;
  std::vector<Table> tables_;
  std::vector<ColumnId> primary_keys_;
  std::vector<std::pair<ColumnId, ColumnId>> foreign_keys_;
  std::unordered_map<std::string, std::size_t> table_index_;
  std::vector<std::unordered_map<std::string, std::size_t>> column_index_;
};

using CatalogMap = std::map<std::string, SchemaCatalog>;

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, std::initializer_list<const char*> keys,
                                           const std::string& where) {
  for (const char* key : keys) {
    auto it = obj.find(key);
    if (it != obj.end()) return *it;
  }
  throw FormatError(where + ": missing field '" + *keys.begin() + "'");
}

}  // namespace detail

/// Builds a catalog from one entry of a Spider/BIRD `tables.json`.
///
/// Columns are given as [table index, name] pairs indexed globally; entry -1
/// (the `*` pseudo-column) is skipped. `primary_keys` may mix single global
/// indices and arrays of indices (composite keys).
inline SchemaCatalog catalog_from_json(const nlohmann::json& entry, std::size_t index = 0) {
  const std::string where = "tables[" + std::to_string(index) + "]";
  try {
    const std::string db_id = detail::require_field(entry, {"db_id"}, where).get<std::string>();
    const std::string ctx = where + " (" + db_id + ")";
    const auto& table_names =
        detail::require_field(entry, {"table_names_original", "table_names"}, ctx);
    const auto& column_names =
        detail::require_field(entry, {"column_names_original", "column_names"}, ctx);
    const auto& column_types = detail::require_field(entry, {"column_types"}, ctx);
    if (!table_names.is_array() || !column_names.is_array() || !column_types.is_array())
      throw FormatError(ctx + ": table/column lists must be arrays");
    if (column_types.size() != column_names.size())
      throw FormatError(ctx + ": column_types and column_names differ in length");

    std::vector<Table> tables;
    for (const auto& name : table_names) tables.push_back(Table{name.get<std::string>(), {}});

    // global column index -> ColumnId (nullopt for the '*' entry)
    std::vector<std::optional<ColumnId>> global(column_names.size());
    for (std::size_t g = 0; g < column_names.size(); ++g) {
      const auto& pair = column_names[g];
      if (!pair.is_array() || pair.size() != 2)
        throw FormatError(ctx + ": column_names[" + std::to_string(g) + "] is not a [table, name] pair");
      const long long t = pair[0].get<long long>();
      if (t < 0) continue;
      if (static_cast<std::size_t>(t) >= tables.size())
        throw FormatError(ctx + ": column_names[" + std::to_string(g) + "] has table index out of range");
      auto& cols = tables[static_cast<std::size_t>(t)].columns;
      global[g] = ColumnId{static_cast<std::size_t>(t), cols.size()};
      cols.push_back(Column{pair[1].get<std::string>(), column_types[g].get<std::string>()});
    }

    auto resolve = [&](const nlohmann::json& v) -> ColumnId {
      const long long g = v.get<long long>();
      if (g < 0 || static_cast<std::size_t>(g) >= global.size() || !global[static_cast<std::size_t>(g)])
        throw FormatError(ctx + ": key references invalid column index " + std::to_string(g));
      return *global[static_cast<std::size_t>(g)];
    };

    std::vector<ColumnId> pks;
    if (auto it = entry.find("primary_keys"); it != entry.end()) {
      for (const auto& pk : *it) {
        if (pk.is_array()) {
          for (const auto& part : pk) pks.push_back(resolve(part));
        } else {
          pks.push_back(resolve(pk));
        }
      }
    }
    std::vector<std::pair<ColumnId, ColumnId>> fks;
    if (auto it = entry.find("foreign_keys"); it != entry.end()) {
      for (const auto& fk : *it) {
        if (!fk.is_array() || fk.size() != 2) throw FormatError(ctx + ": foreign key is not a pair");
        fks.emplace_back(resolve(fk[0]), resolve(fk[1]));
      }
    }
    return SchemaCatalog(db_id, std::move(tables), std::move(pks), std::move(fks));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": " + e.what());
  }
}

inline CatalogMap catalogs_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw FormatError("tables file: top level must be an array");
  CatalogMap out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    SchemaCatalog catalog = catalog_from_json(doc[i], i);
    std::string id = catalog.db_id();
    if (!out.emplace(id, std::move(catalog)).second)
      throw FormatError("tables file: duplicate db_id '" + id + "'");
  }
  return out;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline CatalogMap load_tables_json(const std::filesystem::path& path) {
  try {
    return catalogs_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline std::string ddl_identifier(const std::string& name) {
  bool plain = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
  for (char c : name) plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  if (plain && !is_reserved_word(to_upper(name))) return name;
  std::string out = "`";
  for (char c : name) {
    if (c == '`') out += '`';
    out += c;
  }
  return out + "`";
}

}  // namespace detail

/// CREATE TABLE statements, one per line, in file order. Single-column primary
/// keys and foreign keys are inline column constraints; composite primary keys
/// become a trailing table constraint.
inline std::string serialize_schema_ddl(const SchemaCatalog& catalog) {
  std::string out;
  const auto& tables = catalog.tables();
  for (std::size_t t = 0; t < tables.size(); ++t) {
    std::vector<std::size_t> pk_cols;
    for (const auto& pk : catalog.primary_keys())
      if (pk.table == t) pk_cols.push_back(pk.column);

    if (t) out += '\n';
    out += "CREATE TABLE " + detail::ddl_identifier(tables[t].name) + " (";
    for (std::size_t c = 0; c < tables[t].columns.size(); ++c) {
      const Column& col = tables[t].columns[c];
      if (c) out += ", ";
      out += detail::ddl_identifier(col.name);
      if (!col.type.empty()) out += " " + to_upper(col.type);
      if (pk_cols.size() == 1 && pk_cols[0] == c) out += " PRIMARY KEY";
      for (const auto& [from, to] : catalog.foreign_keys()) {
        if (from.table != t || from.column != c) continue;
        out += " REFERENCES " + detail::ddl_identifier(tables[to.table].name) + "(" +
               detail::ddl_identifier(catalog.column(to).name) + ")";
      }
    }
    if (pk_cols.size() > 1) {
      out += ", PRIMARY KEY (";
      for (std::size_t i = 0; i < pk_cols.size(); ++i) {
        if (i) out += ", ";
        out += detail::ddl_identifier(tables[t].columns[pk_cols[i]].name);
      }
      out += ")";
    }
    out += ");";
  }
  return out;
}

}  // namespace sqlsim
