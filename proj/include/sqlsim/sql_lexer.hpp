#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sqlsim/errors.hpp"

namespace sqlsim {

enum class TokenType { Identifier, Keyword, Number, String, Operator, End };

struct Token {
  TokenType type = TokenType::End;
  // Keywords are uppercased, quoted identifiers unquoted, strings keep quotes.
  std::string text;
  std::size_t offset = 0;
  bool quoted = false;

  bool is_keyword(std::string_view kw) const { return type == TokenType::Keyword && text == kw; }
  bool is_op(std::string_view op) const { return type == TokenType::Operator && text == op; }
};

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Words that can never be bare identifiers.
inline bool is_reserved_word(std::string_view upper) {
  static constexpr std::string_view kReserved[] = {
      "ALL",     "AND",    "AS",     "ASC",     "BETWEEN", "BY",      "CASE",      "CAST",
      "COLLATE", "CROSS",  "DESC",   "DISTINCT", "ELSE",   "END",     "ESCAPE",    "EXCEPT",
      "EXISTS",  "FROM",   "FULL",   "GLOB",    "GROUP",   "HAVING",  "IN",        "INNER",
      "INTERSECT", "IS",   "JOIN",   "LEFT",    "LIKE",    "LIMIT",   "NATURAL",   "NOT",
      "NULL",    "OFFSET", "ON",     "OR",      "ORDER",   "OUTER",   "OVER",      "RIGHT",
      "SELECT",  "THEN",   "UNION",  "USING",   "WHEN",    "WHERE",   "WITH"};
  return std::find(std::begin(kReserved), std::end(kReserved), upper) != std::end(kReserved);
}

namespace detail {
inline bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
inline bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }
}  // namespace detail

/// Splits SQL text into tokens. Total on arbitrary bytes: anything that is not
/// a token raises ParseError at its offset.
///
/// Quoting: backticks and brackets delimit identifiers; single and double
/// quotes delimit string literals (the convention of the Spider and BIRD
/// corpora, which write `name = "Alice"`).
inline std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  auto at = [&](std::size_t k) -> unsigned char { return k < n ? static_cast<unsigned char>(sql[k]) : 0; };

  while (i < n) {
    const unsigned char c = at(i);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && at(i + 1) == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      const std::size_t start = i;
      i += 2;
      while (i < n && !(sql[i] == '*' && at(i + 1) == '/')) ++i;
      if (i >= n) throw ParseError(start, "unterminated block comment");
      i += 2;
      continue;
    }

    Token tok;
    tok.offset = i;
    if (detail::ident_start(c)) {
      std::size_t j = i;
      while (j < n && detail::ident_char(at(j))) ++j;
      std::string word(sql.substr(i, j - i));
      std::string upper = to_upper(word);
      if (is_reserved_word(upper)) {
        tok.type = TokenType::Keyword;
        tok.text = std::move(upper);
      } else {
        tok.type = TokenType::Identifier;
        tok.text = std::move(word);
      }
      i = j;
    } else if (std::isdigit(c) || (c == '.' && std::isdigit(at(i + 1)))) {
      std::size_t j = i;
      while (std::isdigit(at(j))) ++j;
      if (at(j) == '.') {
        ++j;
        while (std::isdigit(at(j))) ++j;
      }
      if ((at(j) == 'e' || at(j) == 'E') &&
          (std::isdigit(at(j + 1)) || ((at(j + 1) == '+' || at(j + 1) == '-') && std::isdigit(at(j + 2))))) {
        j += 2;
        while (std::isdigit(at(j))) ++j;
      }
      if (detail::ident_start(at(j))) throw ParseError(j, "malformed numeric literal");
      tok.type = TokenType::Number;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (c == '\'' || c == '"') {
      std::size_t j = i + 1;
      for (;;) {
        if (j >= n) throw ParseError(i, "unterminated string literal");
        if (static_cast<unsigned char>(sql[j]) == c) {
          if (at(j + 1) == c) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      tok.type = TokenType::String;
      tok.text = std::string(sql.substr(i, j + 1 - i));
      i = j + 1;
    } else if (c == '`' || c == '[') {
      const char close = c == '`' ? '`' : ']';
      std::size_t j = i + 1;
      std::string name;
      for (;;) {
        if (j >= n) throw ParseError(i, "unterminated quoted identifier");
        if (sql[j] == close) {
          if (close == '`' && at(j + 1) == '`') {
            name += '`';
            j += 2;
            continue;
          }
          break;
        }
        name += sql[j++];
      }
      if (name.empty()) throw ParseError(i, "empty quoted identifier");
      tok.type = TokenType::Identifier;
      tok.text = std::move(name);
      tok.quoted = true;
      i = j + 1;
    } else {
      static constexpr std::string_view kTwoChar[] = {"<=", ">=", "<>", "!=", "||"};
      tok.type = TokenType::Operator;
      const std::string_view two = sql.substr(i, 2);
      if (two == "==") {
        tok.text = "=";
        i += 2;
      } else if (std::find(std::begin(kTwoChar), std::end(kTwoChar), two) != std::end(kTwoChar)) {
        tok.text = two == "<>" ? "!=" : std::string(two);
        i += 2;
      } else if (std::string_view("(),.;*+-/%=<>").find(static_cast<char>(c)) != std::string_view::npos) {
        tok.text = std::string(1, static_cast<char>(c));
        ++i;
      } else {
        std::string shown = std::isprint(c) ? std::string("'") + static_cast<char>(c) + "'"
                                            : "byte 0x" + std::to_string(static_cast<int>(c));
        throw ParseError(i, "unexpected character " + shown);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.type = TokenType::End;
  end.offset = n;
  out.push_back(end);
  return out;
}

}  // namespace sqlsim
