#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sqlsim/errors.hpp"
#include "sqlsim/schema.hpp"
#include "sqlsim/sql_ast.hpp"
#include "sqlsim/sql_lexer.hpp"

namespace sqlsim {

/// Tables and qualified columns a query touches, lowercase.
/// Columns are "table.column"; every column's table is also in `tables`.
struct SchemaLinkSet {
  std::set<std::string> tables;
  std::set<std::string> columns;

  /// tables ∪ columns as a single set.
  std::set<std::string> combined() const {
    std::set<std::string> out = tables;
    out.insert(columns.begin(), columns.end());
    return out;
  }

  bool operator==(const SchemaLinkSet&) const = default;
};

enum class JaccardMode {
  Combined,  // one set: tables ∪ columns
  Averaged,  // mean of the table Jaccard and the column Jaccard
};

/// |A ∩ B| / |A ∪ B| over sorted sets. Two empty sets give 1.
template <typename Set>
double jaccard(const Set& a, const Set& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double jaccard_similarity(const SchemaLinkSet& a, const SchemaLinkSet& b,
                                 JaccardMode mode = JaccardMode::Combined) {
  if (mode == JaccardMode::Averaged) return (jaccard(a.tables, b.tables) + jaccard(a.columns, b.columns)) / 2.0;
  return jaccard(a.combined(), b.combined());
}

namespace detail {

class LinkResolver {
 public:
  LinkResolver(const SchemaCatalog& catalog, SchemaLinkSet& links) : catalog_(catalog), links_(links) {}

  void resolve_statement(AstNode& root) { resolve_query(root, nullptr); }

 private:
  struct Entry {
    std::string name;                   // alias, or table name when unaliased (lowercase)
    std::optional<std::size_t> table;   // catalog table; nullopt for a derived table
    std::set<std::string> derived_columns;
  };

  struct Scope {
    const Scope* parent = nullptr;
    std::vector<Entry> entries;
    std::set<std::string> output_aliases;
    std::set<std::string> using_columns;
  };

  // Resolves a SelectStmt or SetOp. Returns the output column names.
  std::set<std::string> resolve_query(AstNode& query, const Scope* parent) {
    if (query.kind == NodeKind::SetOp) {
      std::set<std::string> outputs = resolve_query(query.children[0], parent);
      resolve_query(query.children[1], parent);
      // ORDER BY / LIMIT of a compound refer to the leftmost select's columns.
      AstNode* leftmost = &query.children[0];
      while (leftmost->kind == NodeKind::SetOp) leftmost = &leftmost->children[0];
      Scope scope = build_scope(*leftmost, parent);
      for (std::size_t i = 2; i < query.children.size(); ++i) resolve_expr(query.children[i], scope);
      return outputs;
    }
    Scope scope = build_scope(query, parent);
    std::set<std::string> outputs;
    for (auto& child : query.children) {
      switch (child.kind) {
        case NodeKind::SelectList:
          for (auto& item : child.children) {
            if (item.kind == NodeKind::Star) {
              expand_star(item, scope);
              continue;
            }
            resolve_expr(item, scope);
            if (item.kind == NodeKind::Alias) {
              outputs.insert(to_lower(item.text));
            } else if (item.kind == NodeKind::ColumnRef) {
              outputs.insert(to_lower(item.text));
            }
          }
          break;
        case NodeKind::FromClause:
          for (auto& item : child.children) {
            if (item.kind != NodeKind::Join) continue;
            for (std::size_t i = 1; i < item.children.size(); ++i)
              if (item.children[i].kind == NodeKind::JoinCondition) resolve_expr(item.children[i], scope);
          }
          break;
        default:
          resolve_expr(child, scope);
      }
    }
    return outputs;
  }

  Scope build_scope(AstNode& select, const Scope* parent) {
    Scope scope;
    scope.parent = parent;
    for (auto& child : select.children) {
      if (child.kind == NodeKind::SelectList) {
        for (const auto& item : child.children)
          if (item.kind == NodeKind::Alias) scope.output_aliases.insert(to_lower(item.text));
      }
      if (child.kind != NodeKind::FromClause) continue;
      for (auto& item : child.children) {
        if (item.kind == NodeKind::Join) {
          const std::size_t before = scope.entries.size();
          add_from_item(item.children[0], scope, parent);
          for (std::size_t i = 1; i < item.children.size(); ++i)
            if (item.children[i].kind == NodeKind::Using) link_using(item.children[i], scope, before);
        } else {
          add_from_item(item, scope, parent);
        }
      }
    }
    return scope;
  }

  void add_from_item(AstNode& item, Scope& scope, const Scope* parent) {
    AstNode* base = &item;
    std::string alias;
    if (item.kind == NodeKind::Alias) {
      alias = to_lower(item.text);
      base = &item.children[0];
    }
    Entry entry;
    if (base->kind == NodeKind::TableRef) {
      const auto t = catalog_.find_table(base->text);
      if (!t) throw UnknownTable(base->text);
      const std::string name = to_lower(catalog_.tables()[*t].name);
      base->resolved = name;
      links_.tables.insert(name);
      entry.table = t;
      entry.name = alias.empty() ? name : alias;
    } else {
      entry.derived_columns = resolve_query(base->children[0], parent);
      entry.name = alias;
    }
    scope.entries.push_back(std::move(entry));
  }

  // USING (c): the column is used by the joined table and by every earlier
  // table in the FROM clause that owns it.
  void link_using(AstNode& using_node, Scope& scope, std::size_t right_index) {
    for (auto& col : using_node.children) {
      const std::string name = to_lower(col.text);
      bool linked_right = false;
      for (std::size_t e = 0; e < scope.entries.size(); ++e) {
        const Entry& entry = scope.entries[e];
        if (!entry.table) continue;
        if (const auto c = catalog_.find_column(*entry.table, name)) {
          const std::string id = link_column(*entry.table, *c);
          if (e == right_index) {
            col.resolved = id;
            linked_right = true;
          }
        }
      }
      if (!linked_right && right_index < scope.entries.size() && scope.entries[right_index].table)
        throw UnresolvedReference(col.text, {});
      scope.using_columns.insert(name);
    }
  }

  std::string link_column(std::size_t table, std::size_t column) {
    const std::string t = to_lower(catalog_.tables()[table].name);
    const std::string id = t + "." + to_lower(catalog_.tables()[table].columns[column].name);
    links_.tables.insert(t);
    links_.columns.insert(id);
    return id;
  }

  void link_all_columns(std::size_t table) {
    for (std::size_t c = 0; c < catalog_.tables()[table].columns.size(); ++c) link_column(table, c);
  }

  const Entry* find_entry(const Scope& scope, std::string_view qualifier) const {
    const std::string q = to_lower(qualifier);
    for (const Scope* s = &scope; s; s = s->parent) {
      for (const auto& e : s->entries)
        if (e.name == q) return &e;
      // Fall back to the base table name of an aliased entry.
      for (const auto& e : s->entries)
        if (e.table && to_lower(catalog_.tables()[*e.table].name) == q) return &e;
    }
    return nullptr;
  }

  void expand_star(AstNode& star, const Scope& scope) {
    if (star.qualifier.empty()) {
      for (const auto& e : scope.entries)
        if (e.table) link_all_columns(*e.table);
      return;
    }
    const Entry* e = find_entry(scope, star.qualifier);
    if (!e) throw UnresolvedReference(star.qualifier + ".*", {});
    if (e->table) link_all_columns(*e->table);
  }

  void resolve_column(AstNode& ref, const Scope& scope) {
    const std::string name = to_lower(ref.text);
    if (!ref.qualifier.empty()) {
      const Entry* e = find_entry(scope, ref.qualifier);
      if (!e) throw UnresolvedReference(ref.qualifier + "." + ref.text, {});
      if (e->table) {
        const auto c = catalog_.find_column(*e->table, name);
        if (!c) throw UnresolvedReference(ref.qualifier + "." + ref.text, {});
        ref.resolved = link_column(*e->table, *c);
        return;
      }
      if (!e->derived_columns.count(name)) throw UnresolvedReference(ref.qualifier + "." + ref.text, {});
      return;
    }

    for (const Scope* s = &scope; s; s = s->parent) {
      std::vector<std::pair<std::size_t, std::size_t>> owners;
      bool derived = false;
      for (const auto& e : s->entries) {
        if (e.table) {
          if (const auto c = catalog_.find_column(*e.table, name)) owners.emplace_back(*e.table, *c);
        } else if (e.derived_columns.count(name)) {
          derived = true;
        }
      }
      // The same base table joined twice under two aliases is still one owner.
      std::sort(owners.begin(), owners.end());
      owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
      if (owners.size() == 1 && !derived) {
        ref.resolved = link_column(owners[0].first, owners[0].second);
        return;
      }
      if (owners.empty() && derived) return;
      if (owners.size() > 1 || (derived && !owners.empty())) {
        if (s->using_columns.count(name) && !owners.empty()) {
          ref.resolved = link_column(owners[0].first, owners[0].second);
          return;
        }
        std::vector<std::string> candidates;
        for (const auto& [t, c] : owners)
          candidates.push_back(to_lower(catalog_.tables()[t].name) + "." + name);
        throw UnresolvedReference(ref.text, std::move(candidates));
      }
      if (s->output_aliases.count(name)) return;
    }
    throw UnresolvedReference(ref.text, {});
  }

  void resolve_expr(AstNode& node, const Scope& scope) {
    switch (node.kind) {
      case NodeKind::ColumnRef:
        resolve_column(node, scope);
        return;
      case NodeKind::Subquery:
        resolve_query(node.children[0], &scope);
        return;
      default:
        for (auto& c : node.children) resolve_expr(c, scope);
    }
  }

  const SchemaCatalog& catalog_;
  SchemaLinkSet& links_;
};

}  // namespace detail

/// Resolves every table and column reference in `ast` against `catalog`,
/// filling `AstNode::resolved`, and returns the link set.
///
/// Aliases resolve to base tables; unqualified columns resolve by unique
/// ownership among FROM tables (innermost scope first, then enclosing
/// queries); a select-list `*` contributes every column of the FROM tables;
/// USING columns count for both joined sides. COUNT(*) links no columns.
inline SchemaLinkSet resolve_references(SqlAst& ast, const SchemaCatalog& catalog) {
  SchemaLinkSet links;
  detail::LinkResolver resolver(catalog, links);
  resolver.resolve_statement(ast.root);
  return links;
}

inline SchemaLinkSet extract_links(const SqlAst& ast, const SchemaCatalog& catalog) {
  SqlAst copy = ast;
  return resolve_references(copy, catalog);
}

}  // namespace sqlsim
