#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlsim/errors.hpp"

namespace sqlsim {

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider;
};

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]. A single sqrt of the norm
/// product keeps cos(v, v) at exactly 1.
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  return cosine_similarity(std::span<const double>(a.values), std::span<const double>(b.values));
}

/// Maps a cosine in [-1, 1] onto [0, 1] as (c + 1) / 2.
inline double rescale_question_sim(double cosine) { return (cosine + 1.0) / 2.0; }

inline constexpr std::string_view kRescaleRule = "(cos+1)/2";

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::size_t kHashedDimension = 256;

inline std::string hashed_provider_name(std::size_t dim = kHashedDimension) {
  return "hashed-bow-" + std::to_string(dim);
}

/// Deterministic offline embedding: lowercase alphanumeric tokens, each
/// counted into bucket fnv1a64(token) % dim. Text without tokens counts the
/// single pseudo-token "<empty>", so no vector is ever zero.
inline EmbeddingVector hashed_bag_of_tokens(std::string_view text, std::size_t dim = kHashedDimension) {
  EmbeddingVector v{std::vector<double>(dim, 0.0), hashed_provider_name(dim)};
  std::string token;
  bool any = false;
  auto flush = [&] {
    if (token.empty()) return;
    v.values[fnv1a64(token) % dim] += 1.0;
    token.clear();
    any = true;
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      token += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  if (!any) v.values[fnv1a64("<empty>") % dim] = 1.0;
  return v;
}

/// id -> vector, loaded from JSONL lines {"id": int, "vector": [...], "provider": str}.
class EmbeddingTable {
 public:
  void insert(long long id, EmbeddingVector v) {
    for (double x : v.values)
      if (!std::isfinite(x)) throw FormatError("embedding " + std::to_string(id) + " has a non-finite entry");
    auto [it, fresh] = dims_.emplace(v.provider, v.values.size());
    if (!fresh && it->second != v.values.size())
      throw FormatError("embedding " + std::to_string(id) + ": provider '" + v.provider + "' has dimension " +
                        std::to_string(it->second) + ", got " + std::to_string(v.values.size()));
    if (!vectors_.emplace(id, std::move(v)).second)
      throw FormatError("duplicate embedding id " + std::to_string(id));
  }

  const EmbeddingVector* find(long long id) const {
    auto it = vectors_.find(id);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return vectors_.size(); }

  std::string providers() const {
    std::string out;
    for (const auto& [name, dim] : dims_) out += (out.empty() ? "" : ",") + name;
    return out;
  }

  static EmbeddingTable load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path.string() + ":" + std::to_string(line_no);
      try {
        const auto obj = nlohmann::json::parse(line);
        EmbeddingVector v;
        v.values = obj.at("vector").get<std::vector<double>>();
        v.provider = obj.value("provider", std::string("unknown"));
        table.insert(obj.at("id").get<long long>(), std::move(v));
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(where + ": " + e.what());
      } catch (const FormatError& e) {
        throw FormatError(where + ": " + e.what());
      }
    }
    return table;
  }

 private:
  std::map<long long, EmbeddingVector> vectors_;
  std::map<std::string, std::size_t> dims_;
};

/// Where question vectors come from: a loaded table, or the hashed fallback
/// when no table is given.
class EmbeddingSource {
 public:
  EmbeddingSource() = default;  // fallback provider
  explicit EmbeddingSource(const EmbeddingTable* table) : table_(table) {}

  bool uses_fallback() const noexcept { return table_ == nullptr; }

  std::string provider() const { return table_ ? table_->providers() : hashed_provider_name(); }

  /// Vector for an example. With a table, `id` must be present; otherwise the
  /// question text is hashed.
  std::optional<EmbeddingVector> lookup(std::optional<long long> id, std::string_view question) const {
    if (!table_) return hashed_bag_of_tokens(question);
    if (!id) return std::nullopt;
    const EmbeddingVector* v = table_->find(*id);
    if (!v) return std::nullopt;
    return *v;
  }

 private:
  const EmbeddingTable* table_ = nullptr;
};

}  // namespace sqlsim
