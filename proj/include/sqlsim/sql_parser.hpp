#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqlsim/errors.hpp"
#include "sqlsim/sql_ast.hpp"
#include "sqlsim/sql_lexer.hpp"

namespace sqlsim {

/// Scalar and aggregate functions accepted by the parser (uppercase).
inline bool is_known_function(std::string_view upper) {
  static constexpr std::string_view kFunctions[] = {
      "ABS",      "AVG",        "CEIL",     "CEILING",  "CHAR",      "COALESCE",     "CONCAT",
      "COUNT",    "DATE",       "DATETIME", "EXP",      "FLOOR",     "FORMAT",       "GROUP_CONCAT",
      "HEX",      "IFNULL",     "IIF",      "INSTR",    "JULIANDAY", "LENGTH",       "LN",
      "LOG",      "LOG10",      "LOWER",    "LTRIM",    "MAX",       "MIN",          "MOD",
      "NULLIF",   "POW",        "POWER",    "PRINTF",   "QUOTE",     "RANDOM",       "REPLACE",
      "ROUND",    "RTRIM",      "SIGN",     "SQRT",     "STRFTIME",  "SUBSTR",       "SUBSTRING",
      "SUM",      "TIME",       "TOTAL",    "TRIM",     "TYPEOF",    "UNICODE",      "UNIXEPOCH",
      "UPPER"};
  return std::find(std::begin(kFunctions), std::end(kFunctions), upper) != std::end(kFunctions);
}

/// Type names accepted inside CAST (uppercase).
inline bool is_known_type(std::string_view upper) {
  static constexpr std::string_view kTypes[] = {
      "BIGINT", "BLOB",  "BOOLEAN", "CHAR",    "DATE",  "DATETIME", "DECIMAL", "DOUBLE", "FLOAT",
      "INT",    "INTEGER", "NUMERIC", "REAL",  "SMALLINT", "TEXT",  "TIME",    "VARCHAR"};
  return std::find(std::begin(kTypes), std::end(kTypes), upper) != std::end(kTypes);
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view sql) : tokens_(tokenize(sql)) {}

  AstNode parse_statement() {
    AstNode root = parse_query();
    accept_op(";");
    if (peek().type != TokenType::End) fail({"end of input"});
    return root;
  }

 private:
  static constexpr int kMaxDepth = 200;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) throw ParseError(p.peek().offset, "nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token advance() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool accept_kw(std::string_view kw) {
    if (!peek().is_keyword(kw)) return false;
    advance();
    return true;
  }
  bool accept_op(std::string_view op) {
    if (!peek().is_op(op)) return false;
    advance();
    return true;
  }
  Token expect_kw(std::string_view kw) {
    if (!peek().is_keyword(kw)) fail({std::string(kw)});
    return advance();
  }
  Token expect_op(std::string_view op) {
    if (!peek().is_op(op)) fail({"'" + std::string(op) + "'"});
    return advance();
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case TokenType::End: return "end of input";
      case TokenType::Keyword: return "keyword " + t.text;
      case TokenType::Identifier: return "identifier '" + t.text + "'";
      case TokenType::Number: return "number " + t.text;
      case TokenType::String: return "string " + t.text;
      case TokenType::Operator: return "'" + t.text + "'";
    }
    return "?";
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().offset, std::move(expected), describe(peek()));
  }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw ParseError(peek().offset, "unsupported construct: " + what);
  }

  static AstNode make(NodeKind kind, std::string text, std::size_t offset,
                      std::vector<AstNode> children = {}) {
    AstNode n;
    n.kind = kind;
    n.text = std::move(text);
    n.offset = offset;
    n.children = std::move(children);
    return n;
  }

  // query := select_core { set_op select_core } [ORDER BY ...] [LIMIT ...]
  AstNode parse_query() {
    DepthGuard guard(*this);
    if (peek().is_keyword("WITH")) unsupported("common table expressions");
    AstNode left = parse_select_core();
    for (;;) {
      const std::size_t at = peek().offset;
      std::string op;
      if (accept_kw("UNION")) {
        op = accept_kw("ALL") ? "UNION ALL" : "UNION";
      } else if (accept_kw("INTERSECT")) {
        op = "INTERSECT";
      } else if (accept_kw("EXCEPT")) {
        op = "EXCEPT";
      } else {
        break;
      }
      AstNode right = parse_select_core();
      left = make(NodeKind::SetOp, op, at, {std::move(left), std::move(right)});
    }
    parse_order_limit(left);
    return left;
  }

  AstNode parse_select_core() {
    const Token select = expect_kw("SELECT");
    AstNode stmt = make(NodeKind::SelectStmt, "SELECT", select.offset);
    if (peek().is_keyword("DISTINCT")) {
      stmt.children.push_back(make(NodeKind::Distinct, "DISTINCT", advance().offset));
    } else {
      accept_kw("ALL");
    }
    AstNode list = make(NodeKind::SelectList, "", peek().offset);
    do {
      list.children.push_back(parse_select_item());
    } while (accept_op(","));
    stmt.children.push_back(std::move(list));

    if (peek().is_keyword("FROM")) stmt.children.push_back(parse_from());
    if (peek().is_keyword("WHERE")) {
      const std::size_t at = advance().offset;
      stmt.children.push_back(make(NodeKind::WhereClause, "WHERE", at, {parse_expr()}));
    }
    if (peek().is_keyword("GROUP")) {
      const std::size_t at = advance().offset;
      expect_kw("BY");
      AstNode group = make(NodeKind::GroupBy, "GROUP BY", at);
      do {
        group.children.push_back(parse_expr());
      } while (accept_op(","));
      stmt.children.push_back(std::move(group));
    }
    if (peek().is_keyword("HAVING")) {
      const std::size_t at = advance().offset;
      stmt.children.push_back(make(NodeKind::Having, "HAVING", at, {parse_expr()}));
    }
    return stmt;
  }

  void parse_order_limit(AstNode& owner) {
    if (peek().is_keyword("ORDER")) {
      const std::size_t at = advance().offset;
      expect_kw("BY");
      AstNode order = make(NodeKind::OrderBy, "ORDER BY", at);
      do {
        const std::size_t key_at = peek().offset;
        AstNode expr = parse_expr();
        std::string dir;
        if (accept_kw("ASC")) {
          dir = "ASC";
        } else if (accept_kw("DESC")) {
          dir = "DESC";
        }
        if (peek().type == TokenType::Identifier && to_upper(peek().text) == "NULLS")
          unsupported("NULLS FIRST/LAST");
        order.children.push_back(make(NodeKind::SortKey, dir, key_at, {std::move(expr)}));
      } while (accept_op(","));
      owner.children.push_back(std::move(order));
    }
    if (peek().is_keyword("LIMIT")) {
      const std::size_t at = advance().offset;
      AstNode first = parse_limit_value();
      if (accept_op(",")) {
        // LIMIT <offset>, <count>
        AstNode count = parse_limit_value();
        owner.children.push_back(make(NodeKind::Limit, "LIMIT", at, {std::move(count)}));
        owner.children.push_back(make(NodeKind::Offset, "OFFSET", first.offset, {std::move(first)}));
      } else {
        owner.children.push_back(make(NodeKind::Limit, "LIMIT", at, {std::move(first)}));
        if (peek().is_keyword("OFFSET")) {
          const std::size_t off_at = advance().offset;
          owner.children.push_back(make(NodeKind::Offset, "OFFSET", off_at, {parse_limit_value()}));
        }
      }
    }
  }

  AstNode parse_limit_value() {
    if (peek().type != TokenType::Number) fail({"literal"});
    const Token t = advance();
    return make(NodeKind::Literal, t.text, t.offset);
  }

  AstNode parse_select_item() {
    const Token& t = peek();
    if (t.is_op("*")) {
      advance();
      return make(NodeKind::Star, "*", t.offset);
    }
    if (t.type == TokenType::Identifier && peek(1).is_op(".") && peek(2).is_op("*")) {
      AstNode star = make(NodeKind::Star, "*", t.offset);
      star.qualifier = advance().text;
      advance();
      advance();
      return star;
    }
    AstNode expr = parse_expr();
    return parse_optional_alias(std::move(expr), /*allow_string=*/true);
  }

  AstNode parse_optional_alias(AstNode item, bool allow_string) {
    const std::size_t at = peek().offset;
    std::string alias;
    if (accept_kw("AS")) {
      if (peek().type == TokenType::Identifier) {
        alias = advance().text;
      } else if (allow_string && peek().type == TokenType::String) {
        const std::string raw = advance().text;
        alias = raw.substr(1, raw.size() - 2);
      } else {
        fail({"alias"});
      }
    } else if (peek().type == TokenType::Identifier) {
      alias = advance().text;
    } else {
      return item;
    }
    return make(NodeKind::Alias, alias, at, {std::move(item)});
  }

  AstNode parse_from() {
    const std::size_t at = expect_kw("FROM").offset;
    AstNode from = make(NodeKind::FromClause, "FROM", at);
    from.children.push_back(parse_table_item());
    for (;;) {
      if (accept_op(",")) {
        from.children.push_back(parse_table_item());
        continue;
      }
      const std::size_t join_at = peek().offset;
      std::string join;
      if (peek().is_keyword("NATURAL")) unsupported("NATURAL JOIN");
      if (accept_kw("JOIN")) {
        join = "JOIN";
      } else if (accept_kw("INNER")) {
        expect_kw("JOIN");
        join = "JOIN";
      } else if (peek().is_keyword("LEFT") || peek().is_keyword("RIGHT") || peek().is_keyword("FULL")) {
        join = advance().text + " JOIN";
        accept_kw("OUTER");
        expect_kw("JOIN");
      } else if (accept_kw("CROSS")) {
        expect_kw("JOIN");
        join = "CROSS JOIN";
      } else {
        break;
      }
      AstNode node = make(NodeKind::Join, join, join_at, {parse_table_item()});
      if (peek().is_keyword("ON")) {
        const std::size_t on_at = advance().offset;
        node.children.push_back(make(NodeKind::JoinCondition, "ON", on_at, {parse_expr()}));
      } else if (peek().is_keyword("USING")) {
        const std::size_t using_at = advance().offset;
        expect_op("(");
        AstNode cols = make(NodeKind::Using, "USING", using_at);
        do {
          if (peek().type != TokenType::Identifier) fail({"column name"});
          const Token c = advance();
          cols.children.push_back(make(NodeKind::ColumnRef, c.text, c.offset));
        } while (accept_op(","));
        expect_op(")");
        node.children.push_back(std::move(cols));
      }
      from.children.push_back(std::move(node));
    }
    return from;
  }

  AstNode parse_table_item() {
    const Token& t = peek();
    if (t.is_op("(")) {
      if (!peek(1).is_keyword("SELECT")) {
        advance();
        fail({"SELECT"});
      }
      advance();
      AstNode sub = make(NodeKind::Subquery, "", t.offset, {parse_query()});
      expect_op(")");
      return parse_optional_alias(std::move(sub), false);
    }
    if (t.type != TokenType::Identifier) fail({"table name", "'('"});
    const Token name = advance();
    if (peek().is_op(".")) unsupported("schema-qualified table names");
    return parse_optional_alias(make(NodeKind::TableRef, name.text, name.offset), false);
  }

  // Expression precedence, loosest first:
  //   OR, AND, NOT, comparison/IN/LIKE/BETWEEN/IS, + -, * / %, ||, unary +/-
  AstNode parse_expr() {
    DepthGuard guard(*this);
    return parse_or();
  }

  AstNode parse_or() {
    AstNode left = parse_and();
    while (peek().is_keyword("OR")) {
      const std::size_t at = advance().offset;
      left = make(NodeKind::BinaryOp, "OR", at, {std::move(left), parse_and()});
    }
    return left;
  }

  AstNode parse_and() {
    AstNode left = parse_not();
    while (peek().is_keyword("AND")) {
      const std::size_t at = advance().offset;
      left = make(NodeKind::BinaryOp, "AND", at, {std::move(left), parse_not()});
    }
    return left;
  }

  AstNode parse_not() {
    if (peek().is_keyword("NOT")) {
      DepthGuard guard(*this);
      const std::size_t at = advance().offset;
      return make(NodeKind::UnaryOp, "NOT", at, {parse_not()});
    }
    return parse_predicate();
  }

  static bool is_comparison(const Token& t) {
    if (t.type != TokenType::Operator) return false;
    return t.text == "=" || t.text == "!=" || t.text == "<" || t.text == "<=" || t.text == ">" ||
           t.text == ">=";
  }

  AstNode parse_predicate() {
    AstNode left = parse_additive();
    for (;;) {
      const Token& t = peek();
      if (is_comparison(t)) {
        const Token op = advance();
        left = make(NodeKind::BinaryOp, op.text, op.offset, {std::move(left), parse_additive()});
        continue;
      }
      const std::size_t at = t.offset;
      bool negated = false;
      if (t.is_keyword("NOT") &&
          (peek(1).is_keyword("IN") || peek(1).is_keyword("LIKE") || peek(1).is_keyword("BETWEEN") ||
           peek(1).is_keyword("GLOB"))) {
        advance();
        negated = true;
      }
      const std::string prefix = negated ? "NOT " : "";
      if (accept_kw("IN")) {
        const std::size_t open = expect_op("(").offset;
        AstNode rhs;
        if (peek().is_keyword("SELECT")) {
          rhs = make(NodeKind::Subquery, "", open, {parse_query()});
        } else {
          rhs = make(NodeKind::List, "", open);
          do {
            rhs.children.push_back(parse_expr());
          } while (accept_op(","));
        }
        expect_op(")");
        left = make(NodeKind::BinaryOp, prefix + "IN", at, {std::move(left), std::move(rhs)});
      } else if (accept_kw("LIKE")) {
        AstNode pattern = parse_additive();
        if (peek().is_keyword("ESCAPE")) unsupported("LIKE ... ESCAPE");
        left = make(NodeKind::BinaryOp, prefix + "LIKE", at, {std::move(left), std::move(pattern)});
      } else if (accept_kw("GLOB")) {
        left = make(NodeKind::BinaryOp, prefix + "GLOB", at, {std::move(left), parse_additive()});
      } else if (accept_kw("BETWEEN")) {
        AstNode low = parse_additive();
        expect_kw("AND");
        AstNode high = parse_additive();
        left = make(NodeKind::BinaryOp, prefix + "BETWEEN", at,
                    {std::move(left), std::move(low), std::move(high)});
      } else if (accept_kw("IS")) {
        const bool is_not = accept_kw("NOT");
        if (!peek().is_keyword("NULL")) fail({"NULL"});
        advance();
        left = make(NodeKind::UnaryOp, is_not ? "IS NOT NULL" : "IS NULL", at, {std::move(left)});
      } else {
        break;
      }
    }
    return left;
  }

  AstNode parse_additive() {
    AstNode left = parse_multiplicative();
    while (peek().is_op("+") || peek().is_op("-")) {
      const Token op = advance();
      left = make(NodeKind::BinaryOp, op.text, op.offset, {std::move(left), parse_multiplicative()});
    }
    return left;
  }

  AstNode parse_multiplicative() {
    AstNode left = parse_concat();
    while (peek().is_op("*") || peek().is_op("/") || peek().is_op("%")) {
      const Token op = advance();
      left = make(NodeKind::BinaryOp, op.text, op.offset, {std::move(left), parse_concat()});
    }
    return left;
  }

  AstNode parse_concat() {
    AstNode left = parse_unary();
    while (peek().is_op("||")) {
      const Token op = advance();
      left = make(NodeKind::BinaryOp, "||", op.offset, {std::move(left), parse_unary()});
    }
    return left;
  }

  AstNode parse_unary() {
    if (peek().is_op("-") || peek().is_op("+")) {
      DepthGuard guard(*this);
      const Token op = advance();
      return make(NodeKind::UnaryOp, op.text, op.offset, {parse_unary()});
    }
    AstNode operand = parse_primary();
    if (peek().is_keyword("COLLATE")) unsupported("COLLATE");
    return operand;
  }

  AstNode parse_primary() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::Number:
      case TokenType::String: {
        const Token lit = advance();
        return make(NodeKind::Literal, lit.text, lit.offset);
      }
      case TokenType::Keyword:
        if (t.text == "NULL") {
          const Token lit = advance();
          return make(NodeKind::Literal, "NULL", lit.offset);
        }
        if (t.text == "CASE") return parse_case();
        if (t.text == "CAST") return parse_cast();
        if (t.text == "EXISTS") {
          const std::size_t at = advance().offset;
          const std::size_t open = expect_op("(").offset;
          if (!peek().is_keyword("SELECT")) fail({"SELECT"});
          AstNode sub = make(NodeKind::Subquery, "", open, {parse_query()});
          expect_op(")");
          return make(NodeKind::UnaryOp, "EXISTS", at, {std::move(sub)});
        }
        break;
      case TokenType::Operator:
        if (t.text == "(") {
          const std::size_t open = advance().offset;
          if (peek().is_keyword("SELECT")) {
            AstNode sub = make(NodeKind::Subquery, "", open, {parse_query()});
            expect_op(")");
            return sub;
          }
          AstNode inner = parse_expr();
          if (peek().is_op(",")) unsupported("row values");
          expect_op(")");
          return inner;
        }
        break;
      case TokenType::Identifier:
        return parse_identifier_expr();
      case TokenType::End:
        break;
    }
    fail({"expression"});
  }

  AstNode parse_identifier_expr() {
    const Token name = advance();
    if (peek().is_op("(") && !name.quoted) return parse_function_call(name);
    if (peek().is_op(".")) {
      advance();
      if (peek().is_op("*")) {
        AstNode star = make(NodeKind::Star, "*", name.offset);
        star.qualifier = name.text;
        advance();
        return star;
      }
      if (peek().type != TokenType::Identifier) fail({"column name", "'*'"});
      const Token column = advance();
      if (peek().is_op(".")) unsupported("three-part column names");
      AstNode ref = make(NodeKind::ColumnRef, column.text, name.offset);
      ref.qualifier = name.text;
      return ref;
    }
    if (!name.quoted) {
      const std::string upper = to_upper(name.text);
      if (upper == "TRUE" || upper == "FALSE") return make(NodeKind::Literal, upper, name.offset);
    }
    return make(NodeKind::ColumnRef, name.text, name.offset);
  }

  AstNode parse_function_call(const Token& name) {
    const std::string upper = to_upper(name.text);
    if (!is_known_function(upper)) throw ParseError(name.offset, "unsupported function " + upper);
    AstNode call = make(NodeKind::FunctionCall, upper, name.offset);
    expect_op("(");
    if (peek().is_op("*")) {
      call.children.push_back(make(NodeKind::Star, "*", advance().offset));
    } else if (!peek().is_op(")")) {
      if (peek().is_keyword("DISTINCT"))
        call.children.push_back(make(NodeKind::Distinct, "DISTINCT", advance().offset));
      do {
        call.children.push_back(parse_expr());
      } while (accept_op(","));
    }
    expect_op(")");
    if (peek().is_keyword("OVER") ||
        (peek().type == TokenType::Identifier && to_upper(peek().text) == "FILTER"))
      unsupported("window and filter clauses");
    return call;
  }

  AstNode parse_case() {
    const std::size_t at = expect_kw("CASE").offset;
    AstNode node = make(NodeKind::Case, "CASE", at);
    if (!peek().is_keyword("WHEN")) node.children.push_back(parse_expr());
    if (!peek().is_keyword("WHEN")) fail({"WHEN"});
    while (peek().is_keyword("WHEN")) {
      const std::size_t when_at = advance().offset;
      AstNode cond = parse_expr();
      expect_kw("THEN");
      node.children.push_back(make(NodeKind::When, "WHEN", when_at, {std::move(cond), parse_expr()}));
    }
    if (peek().is_keyword("ELSE")) {
      const std::size_t else_at = advance().offset;
      node.children.push_back(make(NodeKind::Else, "ELSE", else_at, {parse_expr()}));
    }
    expect_kw("END");
    return node;
  }

  AstNode parse_cast() {
    const std::size_t at = expect_kw("CAST").offset;
    expect_op("(");
    AstNode value = parse_expr();
    expect_kw("AS");
    if (peek().type != TokenType::Identifier) fail({"type name"});
    const Token type = advance();
    const std::string upper = to_upper(type.text);
    if (!is_known_type(upper)) throw ParseError(type.offset, "unsupported type " + upper);
    AstNode type_node = make(NodeKind::TypeName, upper, type.offset);
    if (accept_op("(")) {
      do {
        if (peek().type != TokenType::Number) fail({"literal"});
        const Token lit = advance();
        type_node.children.push_back(make(NodeKind::Literal, lit.text, lit.offset));
      } while (accept_op(","));
      expect_op(")");
    }
    expect_op(")");
    return make(NodeKind::FunctionCall, "CAST", at, {std::move(value), std::move(type_node)});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

inline std::string quote_identifier(const std::string& name) {
  std::string out = "`";
  for (char c : name) {
    if (c == '`') out += '`';
    out += c;
  }
  return out + "`";
}

inline void unparse_into(const AstNode& n, std::string& out);

inline void unparse_children(const AstNode& n, std::string& out, const char* sep, std::size_t from = 0) {
  for (std::size_t i = from; i < n.children.size(); ++i) {
    if (i > from) out += sep;
    unparse_into(n.children[i], out);
  }
}

inline void unparse_into(const AstNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::SelectStmt:
    case NodeKind::SetOp: {
      std::size_t i = 0;
      if (n.kind == NodeKind::SetOp) {
        unparse_into(n.children[0], out);
        out += " " + n.text + " ";
        unparse_into(n.children[1], out);
        i = 2;
      } else {
        out += "SELECT";
      }
      for (; i < n.children.size(); ++i) {
        out += ' ';
        unparse_into(n.children[i], out);
      }
      break;
    }
    case NodeKind::Distinct: out += "DISTINCT"; break;
    case NodeKind::SelectList: unparse_children(n, out, ", "); break;
    case NodeKind::FromClause:
      out += "FROM ";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += n.children[i].kind == NodeKind::Join ? " " : ", ";
        unparse_into(n.children[i], out);
      }
      break;
    case NodeKind::Join:
      out += n.text + " ";
      unparse_children(n, out, " ");
      break;
    case NodeKind::JoinCondition:
      out += "ON ";
      unparse_into(n.children[0], out);
      break;
    case NodeKind::Using:
      out += "USING (";
      unparse_children(n, out, ", ");
      out += ")";
      break;
    case NodeKind::WhereClause:
    case NodeKind::Having:
      out += n.text + " ";
      unparse_into(n.children[0], out);
      break;
    case NodeKind::GroupBy:
    case NodeKind::OrderBy:
      out += n.text + " ";
      unparse_children(n, out, ", ");
      break;
    case NodeKind::SortKey:
      unparse_into(n.children[0], out);
      if (!n.text.empty()) out += " " + n.text;
      break;
    case NodeKind::Limit:
    case NodeKind::Offset:
      out += n.text + " ";
      unparse_into(n.children[0], out);
      break;
    case NodeKind::Subquery:
      out += "(";
      unparse_into(n.children[0], out);
      out += ")";
      break;
    case NodeKind::FunctionCall:
      out += n.text + "(";
      if (n.text == "CAST") {
        unparse_into(n.children[0], out);
        out += " AS ";
        unparse_into(n.children[1], out);
      } else if (!n.children.empty() && n.children[0].kind == NodeKind::Distinct) {
        out += "DISTINCT ";
        unparse_children(n, out, ", ", 1);
      } else {
        unparse_children(n, out, ", ");
      }
      out += ")";
      break;
    case NodeKind::BinaryOp:
      out += "(";
      unparse_into(n.children[0], out);
      out += " " + n.text + " ";
      if (n.text == "IN" || n.text == "NOT IN") {
        if (n.children[1].kind == NodeKind::List) {
          out += "(";
          unparse_children(n.children[1], out, ", ");
          out += ")";
        } else {
          unparse_into(n.children[1], out);
        }
      } else if (n.children.size() == 3) {
        unparse_into(n.children[1], out);
        out += " AND ";
        unparse_into(n.children[2], out);
      } else {
        unparse_into(n.children[1], out);
      }
      out += ")";
      break;
    case NodeKind::UnaryOp:
      out += "(";
      if (n.text == "IS NULL" || n.text == "IS NOT NULL") {
        unparse_into(n.children[0], out);
        out += " " + n.text;
      } else {
        out += n.text + " ";
        unparse_into(n.children[0], out);
      }
      out += ")";
      break;
    case NodeKind::ColumnRef:
      if (!n.qualifier.empty()) out += quote_identifier(n.qualifier) + ".";
      out += quote_identifier(n.text);
      break;
    case NodeKind::TableRef: out += quote_identifier(n.text); break;
    case NodeKind::Literal: out += n.text; break;
    case NodeKind::Star:
      if (!n.qualifier.empty()) out += quote_identifier(n.qualifier) + ".";
      out += "*";
      break;
    case NodeKind::Alias:
      unparse_into(n.children[0], out);
      out += " AS " + quote_identifier(n.text);
      break;
    case NodeKind::Case:
      out += "CASE";
      for (const auto& c : n.children) {
        out += ' ';
        unparse_into(c, out);
      }
      out += " END";
      break;
    case NodeKind::When:
      out += "WHEN ";
      unparse_into(n.children[0], out);
      out += " THEN ";
      unparse_into(n.children[1], out);
      break;
    case NodeKind::Else:
      out += "ELSE ";
      unparse_into(n.children[0], out);
      break;
    case NodeKind::List:
      out += "(";
      unparse_children(n, out, ", ");
      out += ")";
      break;
    case NodeKind::TypeName:
      out += n.text;
      if (!n.children.empty()) {
        out += "(";
        unparse_children(n, out, ", ");
        out += ")";
      }
      break;
  }
}

}  // namespace detail

/// Parses one statement of the supported SELECT subset.
///
/// Throws ParseError (byte offset + expected set) on anything else; never
/// crashes on arbitrary input.
inline SqlAst parse_sql(std::string_view sql) {
  detail::Parser parser(sql);
  SqlAst ast;
  ast.root = parser.parse_statement();
  ast.source = std::string(sql);
  return ast;
}

/// Renders an AST back to SQL. Expressions are fully parenthesized and
/// identifiers backtick-quoted, so `parse_sql(unparse_sql(a))` is structurally
/// equal to `a`.
inline std::string unparse_sql(const AstNode& root) {
  std::string out;
  detail::unparse_into(root, out);
  return out;
}

}  // namespace sqlsim
