#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqlsim/embedding.hpp"
#include "sqlsim/errors.hpp"
#include "sqlsim/schema.hpp"
#include "sqlsim/schema_link.hpp"
#include "sqlsim/skeleton.hpp"
#include "sqlsim/sql_parser.hpp"
#include "sqlsim/tree_edit.hpp"

namespace sqlsim {

struct QuestionSqlPair {
  long long id = 0;
  std::string db_id;
  std::string question;
  std::string sql;

  bool operator==(const QuestionSqlPair&) const = default;
};

/// The three component similarities and their unweighted mean.
struct SimilarityLabel {
  double question_sim = 0.0;
  double skeleton_sim = 0.0;
  double link_sim = 0.0;
  double mean = 0.0;

  static SimilarityLabel combine(double question, double skeleton, double link) {
    return {question, skeleton, link, (question + skeleton + link) / 3.0};
  }

  bool operator==(const SimilarityLabel&) const = default;
};

/// Unordered pair of example ids, stored as (min, max).
struct PairKey {
  long long lo = 0;
  long long hi = 0;

  PairKey() = default;
  PairKey(long long a, long long b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  auto operator<=>(const PairKey&) const = default;
};

enum class ErrorPolicy { Fail, Skip };

struct ScoreOptions {
  ErrorPolicy on_error = ErrorPolicy::Fail;
  JaccardMode jaccard = JaccardMode::Combined;
  unsigned jobs = 1;
};

/// A pool of same-database examples with everything pairwise scoring needs:
/// skeletons, link sets, question vectors, and the all-pairs distance matrix.
///
/// Examples that fail to parse or resolve either abort preparation (with a
/// PairError naming the example id) or are dropped and reported in
/// `skipped()`, depending on the error policy.
class PoolAnalysis {
 public:
  struct Entry {
    QuestionSqlPair example;
    SkeletonTree skeleton;
    SchemaLinkSet links;
    EmbeddingVector embedding;
  };

  static PoolAnalysis prepare(std::span<const QuestionSqlPair> pool, const SchemaCatalog& catalog,
                              const EmbeddingSource& embeddings, const ScoreOptions& options = {}) {
    for (const auto& ex : pool)
      if (ex.db_id != catalog.db_id())
        throw Error("example " + std::to_string(ex.id) + " belongs to '" + ex.db_id + "', not '" +
                    catalog.db_id() + "'");

    std::vector<std::optional<Entry>> slots(pool.size());
    std::vector<std::string> failures(pool.size());
    parallel_for(pool.size(), options.jobs, [&](std::size_t i) {
      const QuestionSqlPair& ex = pool[i];
      try {
        SqlAst ast = parse_sql(ex.sql);
        Entry entry{ex, build_skeleton(ast), resolve_references(ast, catalog), {}};
        auto v = embeddings.lookup(ex.id, ex.question);
        if (!v) throw MissingReference("embeddings", {std::to_string(ex.id)});
        entry.embedding = std::move(*v);
        slots[i] = std::move(entry);
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    });

    // Report the first failure in pool order so the outcome is independent of jobs.
    if (options.on_error == ErrorPolicy::Fail)
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (!slots[i]) throw PairError(pool[i].id, failures[i]);

    PoolAnalysis out;
    out.jaccard_ = options.jaccard;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (slots[i]) {
        out.index_.emplace(slots[i]->example.id, out.entries_.size());
        out.entries_.push_back(std::move(*slots[i]));
      } else {
        out.skipped_.push_back(PairError(pool[i].id, failures[i]).what());
      }
    }
    std::vector<OrderedLabeledTree> trees;
    trees.reserve(out.entries_.size());
    for (const auto& e : out.entries_) trees.emplace_back(e.skeleton);
    out.distances_ = pairwise_distances(trees, options.jobs);
    return out;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::vector<std::string>& skipped() const noexcept { return skipped_; }
  const DistanceMatrix& distances() const noexcept { return distances_; }
  EditDistance max_distance() const { return distances_.max(); }

  std::optional<std::size_t> index_of(long long id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Label for entries i and j, normalizing the skeleton distance by `d_max`.
  SimilarityLabel label(std::size_t i, std::size_t j, EditDistance d_max) const {
    const Entry& a = entries_[i];
    const Entry& b = entries_[j];
    const double question = rescale_question_sim(cosine_similarity(a.embedding, b.embedding));
    const double skeleton = normalize_distance(distances_.at(i, j), d_max);
    const double link = jaccard_similarity(a.links, b.links, jaccard_);
    return SimilarityLabel::combine(question, skeleton, link);
  }

  SimilarityLabel label(std::size_t i, std::size_t j) const { return label(i, j, max_distance()); }

 private:
  std::vector<Entry> entries_;
  std::map<long long, std::size_t> index_;
  std::vector<std::string> skipped_;
  DistanceMatrix distances_;
  JaccardMode jaccard_ = JaccardMode::Combined;
};

/// Labels every unordered pair of a single-database pool. The skeleton
/// component is normalized by the pool's maximum distance unless `d_max` is
/// given (e.g. a dataset-wide maximum).
inline std::map<PairKey, SimilarityLabel> score_pool(std::span<const QuestionSqlPair> pool,
                                                     const SchemaCatalog& catalog,
                                                     const EmbeddingSource& embeddings,
                                                     const ScoreOptions& options = {},
                                                     std::optional<EditDistance> d_max = std::nullopt) {
  const PoolAnalysis analysis = PoolAnalysis::prepare(pool, catalog, embeddings, options);
  const EditDistance scale = d_max.value_or(analysis.max_distance());
  const auto& entries = analysis.entries();
  std::map<PairKey, SimilarityLabel> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      out.emplace(PairKey(entries[i].example.id, entries[j].example.id), analysis.label(i, j, scale));
  return out;
}

}  // namespace sqlsim
