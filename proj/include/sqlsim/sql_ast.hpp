#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlsim {

/// Node kinds of the parsed SQL subset.
///
/// The inventory is frozen: golden skeleton files depend on it. Keyword-like
/// structure that the grammar makes implicit (ON, USING, sort direction,
/// DISTINCT, CASE arms) gets its own kind so that it survives masking.
enum class NodeKind {
  SelectStmt,
  SelectList,
  FromClause,
  Join,
  JoinCondition,
  Using,
  WhereClause,
  GroupBy,
  Having,
  OrderBy,
  SortKey,
  Limit,
  Offset,
  SetOp,
  Subquery,
  FunctionCall,
  BinaryOp,
  UnaryOp,
  ColumnRef,
  TableRef,
  Literal,
  Star,
  Alias,
  Case,
  When,
  Else,
  List,
  Distinct,
  TypeName,
};

constexpr std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::SelectStmt: return "select-stmt";
    case NodeKind::SelectList: return "select-list";
    case NodeKind::FromClause: return "from-clause";
    case NodeKind::Join: return "join";
    case NodeKind::JoinCondition: return "join-condition";
    case NodeKind::Using: return "using";
    case NodeKind::WhereClause: return "where-clause";
    case NodeKind::GroupBy: return "group-by";
    case NodeKind::Having: return "having";
    case NodeKind::OrderBy: return "order-by";
    case NodeKind::SortKey: return "sort-key";
    case NodeKind::Limit: return "limit";
    case NodeKind::Offset: return "offset";
    case NodeKind::SetOp: return "set-op";
    case NodeKind::Subquery: return "subquery";
    case NodeKind::FunctionCall: return "function-call";
    case NodeKind::BinaryOp: return "binary-op";
    case NodeKind::UnaryOp: return "unary-op";
    case NodeKind::ColumnRef: return "column-ref";
    case NodeKind::TableRef: return "table-ref";
    case NodeKind::Literal: return "literal";
    case NodeKind::Star: return "star";
    case NodeKind::Alias: return "alias";
    case NodeKind::Case: return "case";
    case NodeKind::When: return "when";
    case NodeKind::Else: return "else";
    case NodeKind::List: return "list";
    case NodeKind::Distinct: return "distinct";
    case NodeKind::TypeName: return "type-name";
  }
  return "?";
}

/// One node of the SQL syntax tree. Children are in source order.
///
/// `text` holds the token text: the canonical operator / keyword spelling for
/// structural nodes, the unquoted identifier for references and aliases, and
/// the raw literal spelling for literals. `qualifier` is the table qualifier of
/// a column-ref or star (`T1` in `T1.name`). `resolved` is filled by schema
/// resolution with the lowercase catalog id ("table" or "table.column");
/// empty means unresolved.
struct AstNode {
  NodeKind kind = NodeKind::Literal;
  std::string text;
  std::string qualifier;
  std::size_t offset = 0;
  std::vector<AstNode> children;
  std::string resolved;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
};

/// Structural equality: kind, text, qualifier and children. Source offsets and
/// resolution state are ignored.
inline bool same_structure(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || a.text != b.text || a.qualifier != b.qualifier ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(a.children[i], b.children[i])) return false;
  return true;
}

struct SqlAst {
  AstNode root;
  std::string source;
};

}  // namespace sqlsim
