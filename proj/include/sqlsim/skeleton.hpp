#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sqlsim/sql_ast.hpp"
#include "sqlsim/sql_parser.hpp"

namespace sqlsim {

/// Ordered labeled rooted tree of a schema-masked query.
///
/// Labels come from a closed alphabet (see `is_skeleton_label`):
///   structure   SELECT-STMT SELECT-LIST FROM JOIN LEFT-JOIN RIGHT-JOIN
///               FULL-JOIN CROSS-JOIN ON USING WHERE GROUP-BY HAVING ORDER-BY
///               ASC DESC LIMIT OFFSET UNION UNION-ALL INTERSECT EXCEPT
///               SUBQUERY CASE WHEN ELSE LIST DISTINCT
///   operators   = != < <= > >= + - * / % || AND OR NOT LIKE NOT-LIKE GLOB
///               NOT-GLOB IN NOT-IN BETWEEN NOT-BETWEEN IS-NULL IS-NOT-NULL EXISTS
///   functions   uppercased names accepted by the parser, plus CAST
///   types       uppercased CAST target types
///   placeholders TAB COL VAL STAR
struct SkeletonTree {
  std::string label;
  std::vector<SkeletonTree> children;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  bool operator==(const SkeletonTree&) const = default;
};

inline bool is_skeleton_label(std::string_view label) {
  static constexpr std::string_view kFixed[] = {
      "SELECT-STMT", "SELECT-LIST", "FROM",      "JOIN",        "LEFT-JOIN", "RIGHT-JOIN",
      "FULL-JOIN",   "CROSS-JOIN",  "ON",        "USING",       "WHERE",     "GROUP-BY",
      "HAVING",      "ORDER-BY",    "ASC",       "DESC",        "LIMIT",     "OFFSET",
      "UNION",       "UNION-ALL",   "INTERSECT", "EXCEPT",      "SUBQUERY",  "CASE",
      "WHEN",        "ELSE",        "LIST",      "DISTINCT",    "=",         "!=",
      "<",           "<=",          ">",         ">=",          "+",         "-",
      "*",           "/",           "%",         "||",          "AND",       "OR",
      "NOT",         "LIKE",        "NOT-LIKE",  "GLOB",        "NOT-GLOB",  "IN",
      "NOT-IN",      "BETWEEN",     "NOT-BETWEEN", "IS-NULL",   "IS-NOT-NULL", "EXISTS",
      "CAST",        "TAB",         "COL",       "VAL",         "STAR"};
  if (std::find(std::begin(kFixed), std::end(kFixed), label) != std::end(kFixed)) return true;
  return is_known_function(label) || is_known_type(label);
}

namespace detail {

inline std::string dashed(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), ' ', '-');
  return out;
}

inline std::string skeleton_label(const AstNode& n) {
  switch (n.kind) {
    case NodeKind::SelectStmt: return "SELECT-STMT";
    case NodeKind::SelectList: return "SELECT-LIST";
    case NodeKind::FromClause: return "FROM";
    case NodeKind::Join: return dashed(n.text);
    case NodeKind::JoinCondition: return "ON";
    case NodeKind::Using: return "USING";
    case NodeKind::WhereClause: return "WHERE";
    case NodeKind::GroupBy: return "GROUP-BY";
    case NodeKind::Having: return "HAVING";
    case NodeKind::OrderBy: return "ORDER-BY";
    case NodeKind::SortKey: return n.text.empty() ? "ASC" : n.text;
    case NodeKind::Limit: return "LIMIT";
    case NodeKind::Offset: return "OFFSET";
    case NodeKind::SetOp: return dashed(n.text);
    case NodeKind::Subquery: return "SUBQUERY";
    case NodeKind::FunctionCall: return n.text;
    case NodeKind::BinaryOp: return dashed(n.text);
    case NodeKind::UnaryOp: return dashed(n.text);
    case NodeKind::ColumnRef: return "COL";
    case NodeKind::TableRef: return "TAB";
    case NodeKind::Literal: return "VAL";
    case NodeKind::Star: return "STAR";
    case NodeKind::Case: return "CASE";
    case NodeKind::When: return "WHEN";
    case NodeKind::Else: return "ELSE";
    case NodeKind::List: return "LIST";
    case NodeKind::Distinct: return "DISTINCT";
    case NodeKind::TypeName: return n.text;
    case NodeKind::Alias: break;
  }
  return {};
}

inline SkeletonTree mask(const AstNode& n) {
  // Aliases vanish: the aliased item takes the alias node's place.
  const AstNode* node = &n;
  while (node->kind == NodeKind::Alias) node = &node->children.front();
  SkeletonTree t{skeleton_label(*node), {}};
  t.children.reserve(node->children.size());
  for (const auto& c : node->children) t.children.push_back(mask(c));
  return t;
}

inline void render_sexpr(const SkeletonTree& t, std::string& out) {
  out += t.label;
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    render_sexpr(t.children[i], out);
  }
  out += ')';
}

inline void render_indented(const SkeletonTree& t, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += t.label;
  out += '\n';
  for (const auto& c : t.children) render_indented(c, depth + 1, out);
}

}  // namespace detail

/// Masks schema mentions and literals: table-ref -> TAB, column-ref -> COL,
/// literal -> VAL, `*` -> STAR. Aliases are dropped; everything else keeps its
/// keyword, operator or function label and its position.
inline SkeletonTree build_skeleton(const SqlAst& ast) { return detail::mask(ast.root); }

inline SkeletonTree skeleton_of(std::string_view sql) { return build_skeleton(parse_sql(sql)); }

/// Canonical form: label, then parenthesized comma-separated children.
/// Leaves print as the bare label, e.g. `SELECT-STMT(SELECT-LIST(COL),FROM(TAB))`.
inline std::string render_skeleton(const SkeletonTree& tree) {
  std::string out;
  detail::render_sexpr(tree, out);
  return out;
}

/// One label per line, indented two spaces per depth level.
inline std::string render_skeleton_tree(const SkeletonTree& tree) {
  std::string out;
  detail::render_indented(tree, 0, out);
  return out;
}

template <typename F>
void for_each_postorder(const SkeletonTree& t, F&& f) {
  for (const auto& c : t.children) for_each_postorder(c, f);
  f(t);
}

}  // namespace sqlsim
