#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqlsim {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string join_strings(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Malformed or out-of-subset SQL. `offset` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, std::string found)
      : Error("parse error at offset " + std::to_string(offset) + ": expected " +
              (expected.empty() ? std::string("<nothing>") : "{" + join_strings(expected) + "}") +
              ", found " + found),
        offset_(offset),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string found_;
};

class EmptyTree : public Error {
 public:
  EmptyTree() : Error("tree edit distance requires non-empty trees") {}
};

class SizeLimit : public Error {
 public:
  SizeLimit(std::size_t size, std::size_t cap)
      : Error("tree of size " + std::to_string(size) + " exceeds brute-force cap " +
              std::to_string(cap)) {}
};

class UnresolvedReference : public Error {
 public:
  UnresolvedReference(std::string identifier, std::vector<std::string> candidates)
      : Error("unresolved reference '" + identifier + "'" +
              (candidates.empty() ? std::string()
                                  : " (ambiguous among: " + join_strings(candidates) + ")")),
        identifier_(std::move(identifier)),
        candidates_(std::move(candidates)) {}

  const std::string& identifier() const noexcept { return identifier_; }
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::string identifier_;
  std::vector<std::string> candidates_;
};

class UnknownTable : public Error {
 public:
  explicit UnknownTable(std::string table)
      : Error("unknown table '" + table + "'"), table_(std::move(table)) {}
  const std::string& table() const noexcept { return table_; }

 private:
  std::string table_;
};

/// Input file does not match the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class MissingCatalog : public Error {
 public:
  explicit MissingCatalog(std::vector<std::string> db_ids)
      : Error("no catalog for db_id(s): " + join_strings(db_ids)), db_ids_(std::move(db_ids)) {}
  const std::vector<std::string>& db_ids() const noexcept { return db_ids_; }

 private:
  std::vector<std::string> db_ids_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("embedding dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cosine similarity of a zero vector is undefined") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("score vectors differ in length: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class KTooLarge : public Error {
 public:
  KTooLarge(std::size_t k, std::size_t n)
      : Error("precision@" + std::to_string(k) + " requested on " + std::to_string(n) + " items") {}
};

class MissingReference : public Error {
 public:
  MissingReference(const std::string& what, std::vector<std::string> keys)
      : Error(what + ": " + std::to_string(keys.size()) + " key(s) missing, first: " +
              (keys.empty() ? std::string() : keys.front())),
        keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

class ScorerUnavailable : public Error {
 public:
  using Error::Error;
};

class EmptyPool : public Error {
 public:
  EmptyPool() : Error("candidate pool is empty") {}
};

/// Wraps a per-example failure with the example id that caused it.
class PairError : public Error {
 public:
  PairError(long long id, const std::string& cause)
      : Error("example " + std::to_string(id) + ": " + cause), id_(id) {}
  long long id() const noexcept { return id_; }

 private:
  long long id_;
};

}  // namespace sqlsim
