#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlsim/embedding.hpp"
#include "sqlsim/errors.hpp"
#include "sqlsim/parallel.hpp"
#include "sqlsim/schema.hpp"
#include "sqlsim/schema_link.hpp"
#include "sqlsim/similarity.hpp"
#include "sqlsim/skeleton.hpp"
#include "sqlsim/tree_edit.hpp"

namespace sqlsim {

enum class ScorerKind { Oracle, Skeleton, Link, Embed, File };

inline std::string_view scorer_name(ScorerKind k) {
  switch (k) {
    case ScorerKind::Oracle: return "oracle";
    case ScorerKind::Skeleton: return "skeleton";
    case ScorerKind::Link: return "link";
    case ScorerKind::Embed: return "embed";
    case ScorerKind::File: return "file";
  }
  return "?";
}

inline std::optional<ScorerKind> parse_scorer(std::string_view name) {
  for (auto k : {ScorerKind::Oracle, ScorerKind::Skeleton, ScorerKind::Link, ScorerKind::Embed, ScorerKind::File})
    if (scorer_name(k) == name) return k;
  return std::nullopt;
}

struct ScoredCandidate {
  QuestionSqlPair candidate;
  double score = 0.0;
  std::optional<SimilarityLabel> components;
};

/// The question being answered. `sql` is the gold query, needed by every
/// scorer that compares SQL; `id` keys it into a precomputed embedding table
/// and keeps it from being selected as its own example.
struct SelectionTarget {
  std::string question;
  std::optional<std::string> sql;
  std::optional<long long> id;
};

struct SelectOptions {
  ScorerKind scorer = ScorerKind::Oracle;
  std::size_t k = 1;
  EmbeddingSource embeddings;                        // fallback unless a table is given
  const std::map<long long, double>* external = nullptr;  // candidate id -> score, for ScorerKind::File
  JaccardMode jaccard = JaccardMode::Combined;
  unsigned jobs = 1;
};

namespace detail {

inline EmbeddingVector embed_or_unavailable(const EmbeddingSource& source, std::optional<long long> id,
                                            const std::string& question, const std::string& who) {
  auto v = source.lookup(id, question);
  if (!v) throw ScorerUnavailable("no embedding for " + who);
  return *v;
}

}  // namespace detail

/// Ranks the in-domain pool against the target and returns the best k,
/// highest score first, equal scores by ascending candidate id. Because the
/// full ranking is computed first, the result for k is a prefix of k + 1.
///
/// The skeleton component is normalized by the largest distance among the
/// pool and between the target and the pool.
inline std::vector<ScoredCandidate> select_top_k(const SelectionTarget& target,
                                                  std::span<const QuestionSqlPair> pool,
                                                  const SchemaCatalog& catalog, const SelectOptions& options) {
  std::vector<QuestionSqlPair> candidates;
  for (const auto& ex : pool) {
    if (ex.db_id != catalog.db_id())
      throw Error("candidate " + std::to_string(ex.id) + " is from '" + ex.db_id + "', target database is '" +
                  catalog.db_id() + "'");
    if (target.id && ex.id == *target.id) continue;
    candidates.push_back(ex);
  }
  if (candidates.empty()) throw EmptyPool();

  const ScorerKind kind = options.scorer;
  const bool needs_sql = kind == ScorerKind::Oracle || kind == ScorerKind::Skeleton || kind == ScorerKind::Link;
  const bool needs_embedding = kind == ScorerKind::Oracle || kind == ScorerKind::Embed;
  if (needs_sql && !target.sql)
    throw ScorerUnavailable(std::string(scorer_name(kind)) + " scorer needs the target SQL");
  if (kind == ScorerKind::File && !options.external)
    throw ScorerUnavailable("file scorer needs an external score table");

  const std::size_t n = candidates.size();
  std::vector<ScoredCandidate> scored(n);

  if (kind == ScorerKind::File) {
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = options.external->find(candidates[i].id);
      if (it == options.external->end()) {
        missing.push_back(std::to_string(candidates[i].id));
        continue;
      }
      if (!(it->second >= 0.0 && it->second <= 1.0))
        throw Error("external score for " + std::to_string(candidates[i].id) + " is outside [0,1]");
      scored[i] = {candidates[i], it->second, std::nullopt};
    }
    if (!missing.empty()) throw MissingReference("external scores", std::move(missing));
  } else {
    std::optional<SqlAst> target_ast;
    SchemaLinkSet target_links;
    std::optional<OrderedLabeledTree> target_tree;
    if (needs_sql) {
      target_ast = parse_sql(*target.sql);
      target_links = resolve_references(*target_ast, catalog);
      target_tree.emplace(build_skeleton(*target_ast));
    }
    std::optional<EmbeddingVector> target_vec;
    if (needs_embedding)
      target_vec = detail::embed_or_unavailable(options.embeddings, target.id, target.question, "the target");

    std::vector<OrderedLabeledTree> trees(n);
    std::vector<SchemaLinkSet> links(n);
    std::vector<EmbeddingVector> vecs(n);
    std::vector<std::string> failures(n);
    parallel_for(n, options.jobs, [&](std::size_t i) {
      try {
        if (needs_sql) {
          SqlAst ast = parse_sql(candidates[i].sql);
          links[i] = resolve_references(ast, catalog);
          trees[i] = OrderedLabeledTree(build_skeleton(ast));
        }
        if (needs_embedding)
          vecs[i] = detail::embed_or_unavailable(options.embeddings, candidates[i].id, candidates[i].question,
                                                 "candidate " + std::to_string(candidates[i].id));
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < n; ++i)
      if (!failures[i].empty()) throw PairError(candidates[i].id, failures[i]);

    std::vector<EditDistance> to_target(n, 0);
    EditDistance d_max = 0;
    if (needs_sql && kind != ScorerKind::Link) {
      parallel_for(n, options.jobs, [&](std::size_t i) { to_target[i] = tree_edit_distance(*target_tree, trees[i]); });
      d_max = std::max(pairwise_distances(trees, options.jobs).max(),
                       *std::max_element(to_target.begin(), to_target.end()));
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double q =
          needs_embedding ? rescale_question_sim(cosine_similarity(*target_vec, vecs[i])) : 0.0;
      const double s = needs_sql ? normalize_distance(to_target[i], d_max) : 0.0;
      const double l = needs_sql ? jaccard_similarity(target_links, links[i], options.jaccard) : 0.0;
      ScoredCandidate& c = scored[i];
      c.candidate = candidates[i];
      switch (kind) {
        case ScorerKind::Oracle:
          c.components = SimilarityLabel::combine(q, s, l);
          c.score = c.components->mean;
          break;
        case ScorerKind::Skeleton: c.score = s; break;
        case ScorerKind::Link: c.score = l; break;
        case ScorerKind::Embed: c.score = q; break;
        case ScorerKind::File: break;
      }
    }
  }

  std::sort(scored.begin(), scored.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.candidate.id < b.candidate.id;
  });
  scored.resize(std::min(options.k, scored.size()));
  return scored;
}

/// Few-shot prompt: schema DDL, the examples in rank order, then the target
/// question with an open SQL line.
inline std::string build_prompt(std::span<const ScoredCandidate> examples, std::string_view target_question,
                                const SchemaCatalog& catalog) {
  auto one_line = [](std::string_view s) {
    std::string out(s);
    std::replace(out.begin(), out.end(), '\n', ' ');
    std::replace(out.begin(), out.end(), '\r', ' ');
    return out;
  };
  std::string out = "-- Database: " + catalog.db_id() + "\n";
  out += serialize_schema_ddl(catalog);
  out += "\n\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out += "-- Example " + std::to_string(i + 1) + "\n";
    out += "Question: " + one_line(examples[i].candidate.question) + "\n";
    out += "SQL: " + one_line(examples[i].candidate.sql) + "\n\n";
  }
  out += "-- Answer the following question with a single SQL query.\n";
  out += "Question: " + one_line(target_question) + "\n";
  out += "SQL:";
  out += "\n";
  return out;
}

}  // namespace sqlsim
