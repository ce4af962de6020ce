#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlsim/embedding.hpp"
#include "sqlsim/errors.hpp"
#include "sqlsim/rng.hpp"
#include "sqlsim/schema.hpp"
#include "sqlsim/similarity.hpp"
#include "sqlsim/version.hpp"

namespace sqlsim {

struct Dataset {
  std::vector<QuestionSqlPair> examples;
  CatalogMap catalogs;

  /// Examples of one database, in id order.
  std::vector<QuestionSqlPair> for_db(std::string_view db_id) const {
    std::vector<QuestionSqlPair> out;
    for (const auto& ex : examples)
      if (ex.db_id == db_id) out.push_back(ex);
    return out;
  }

  std::vector<std::string> db_ids() const {
    std::set<std::string> ids;
    for (const auto& ex : examples) ids.insert(ex.db_id);
    return {ids.begin(), ids.end()};
  }
};

/// Builds a dataset from a JSON array of {question, query|SQL|sql, db_id}
/// objects. Ids are assigned 0..n-1 in array order.
inline Dataset dataset_from_json(const nlohmann::json& doc, CatalogMap catalogs) {
  if (!doc.is_array()) throw FormatError("dataset: top level must be an array");
  Dataset ds;
  ds.catalogs = std::move(catalogs);
  std::set<std::string> missing;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string where = "dataset record " + std::to_string(i);
    if (!rec.is_object()) throw FormatError(where + ": not an object");
    auto text_field = [&](std::initializer_list<const char*> keys) -> std::string {
      for (const char* key : keys) {
        auto it = rec.find(key);
        if (it == rec.end()) continue;
        if (!it->is_string()) throw FormatError(where + ": field '" + key + "' is not a string");
        return it->get<std::string>();
      }
      throw FormatError(where + ": missing field '" + *keys.begin() + "'");
    };
    QuestionSqlPair ex;
    ex.id = static_cast<long long>(i);
    ex.question = text_field({"question"});
    ex.sql = text_field({"query", "SQL", "sql"});
    ex.db_id = text_field({"db_id"});
    if (!ds.catalogs.count(ex.db_id)) missing.insert(ex.db_id);
    ds.examples.push_back(std::move(ex));
  }
  if (!missing.empty()) throw MissingCatalog({missing.begin(), missing.end()});
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& data_path, const std::filesystem::path& tables_path) {
  CatalogMap catalogs = load_tables_json(tables_path);
  try {
    return dataset_from_json(read_json_file(data_path), std::move(catalogs));
  } catch (const FormatError& e) {
    throw FormatError(data_path.string() + ": " + e.what());
  }
}

/// One training example: a same-database (anchor, candidate) pair with its
/// serialized schema, both questions, and the mean-of-three label.
struct PairRecord {
  std::string db_id;
  long long anchor_id = 0;
  long long candidate_id = 0;
  std::string schema_ddl;
  std::string question_1;
  std::string question_2;
  SimilarityLabel components;
  double label = 0.0;

  bool operator==(const PairRecord&) const = default;
};

inline nlohmann::json to_json(const PairRecord& r) {
  nlohmann::json j;
  j["db_id"] = r.db_id;
  j["anchor_id"] = r.anchor_id;
  j["candidate_id"] = r.candidate_id;
  j["schema_ddl"] = r.schema_ddl;
  j["question_1"] = r.question_1;
  j["question_2"] = r.question_2;
  j["components"] = {{"question_sim", r.components.question_sim},
                     {"skeleton_sim", r.components.skeleton_sim},
                     {"link_sim", r.components.link_sim},
                     {"mean", r.components.mean}};
  j["label"] = r.label;
  return j;
}

/// True when `mean` is the arithmetic mean of the three components to within
/// one unit in the last place.
inline bool is_mean_of_components(const SimilarityLabel& l) {
  const double expected = (l.question_sim + l.skeleton_sim + l.link_sim) / 3.0;
  return l.mean == expected || std::nextafter(expected, 2.0) == l.mean ||
         std::nextafter(expected, -1.0) == l.mean;
}

inline PairRecord record_from_json(const nlohmann::json& j) {
  PairRecord r;
  try {
    r.db_id = j.at("db_id").get<std::string>();
    r.anchor_id = j.at("anchor_id").get<long long>();
    r.candidate_id = j.at("candidate_id").get<long long>();
    r.schema_ddl = j.at("schema_ddl").get<std::string>();
    r.question_1 = j.at("question_1").get<std::string>();
    r.question_2 = j.at("question_2").get<std::string>();
    const auto& c = j.at("components");
    r.components = {c.at("question_sim").get<double>(), c.at("skeleton_sim").get<double>(),
                    c.at("link_sim").get<double>(), c.at("mean").get<double>()};
    r.label = j.at("label").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
  if (r.anchor_id == r.candidate_id) throw FormatError("record pairs an example with itself");
  if (r.label != r.components.mean || !is_mean_of_components(r.components))
    throw FormatError("record label is not the mean of its components");
  return r;
}

enum class NormalizationScope { Database, Global };

inline std::string_view scope_name(NormalizationScope s) {
  return s == NormalizationScope::Database ? "database" : "global";
}

struct CorpusOptions {
  std::size_t k = 20;
  std::uint64_t seed = 0;
  NormalizationScope scope = NormalizationScope::Database;
  JaccardMode jaccard = JaccardMode::Combined;
  ErrorPolicy on_error = ErrorPolicy::Fail;
  bool dedupe = false;
  unsigned jobs = 1;
};

struct CorpusBuild {
  std::vector<PairRecord> records;
  std::map<std::string, std::size_t> pairs_per_db;
  std::vector<std::string> skipped;
  EditDistance global_max_distance = 0;
};

/// For every example, samples min(k, n_db - 1) other examples of the same
/// database uniformly without replacement and labels each (anchor, candidate)
/// pair with the mean-of-three similarity.
///
/// Each database draws from its own stream seeded by (seed, db_id), and
/// anchors draw in id order, so output depends only on the inputs and seed.
/// Records are sorted by (db_id, anchor_id, candidate_id).
inline CorpusBuild generate_pairs(const Dataset& dataset, const EmbeddingSource& embeddings,
                                  const CorpusOptions& options) {
  if (options.k == 0) throw Error("k must be at least 1");
  ScoreOptions score{options.on_error, options.jaccard, options.jobs};

  struct DbPool {
    std::string db_id;
    PoolAnalysis analysis;
    std::string ddl;
  };
  std::vector<DbPool> pools;
  CorpusBuild out;
  for (const auto& db_id : dataset.db_ids()) {
    const SchemaCatalog& catalog = dataset.catalogs.at(db_id);
    const auto examples = dataset.for_db(db_id);
    PoolAnalysis analysis = PoolAnalysis::prepare(examples, catalog, embeddings, score);
    out.skipped.insert(out.skipped.end(), analysis.skipped().begin(), analysis.skipped().end());
    out.global_max_distance = std::max(out.global_max_distance, analysis.max_distance());
    pools.push_back({db_id, std::move(analysis), serialize_schema_ddl(catalog)});
  }

  for (const auto& pool : pools) {
    const auto& entries = pool.analysis.entries();
    const std::size_t n = entries.size();
    const std::size_t m = n == 0 ? 0 : std::min(options.k, n - 1);
    const EditDistance d_max = options.scope == NormalizationScope::Database
                                   ? pool.analysis.max_distance()
                                   : out.global_max_distance;
    SampleStream stream(SampleStream::derive(options.seed, pool.db_id));
    std::size_t count = 0;
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::size_t> candidates;
      candidates.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c)
        if (c != a) candidates.push_back(c);
      stream.sample_in_place(candidates, m);
      std::sort(candidates.begin(), candidates.end());
      for (const std::size_t c : candidates) {
        PairRecord r;
        r.db_id = pool.db_id;
        r.anchor_id = entries[a].example.id;
        r.candidate_id = entries[c].example.id;
        r.schema_ddl = pool.ddl;
        r.question_1 = entries[a].example.question;
        r.question_2 = entries[c].example.question;
        r.components = pool.analysis.label(a, c, d_max);
        r.label = r.components.mean;
        out.records.push_back(std::move(r));
        ++count;
      }
    }
    out.pairs_per_db[pool.db_id] = count;
  }

  std::sort(out.records.begin(), out.records.end(), [](const PairRecord& x, const PairRecord& y) {
    return std::tie(x.db_id, x.anchor_id, x.candidate_id) < std::tie(y.db_id, y.anchor_id, y.candidate_id);
  });

  if (options.dedupe) {
    std::set<std::pair<std::string, PairKey>> seen;
    std::vector<PairRecord> kept;
    out.pairs_per_db.clear();
    for (auto& r : out.records) {
      if (!seen.emplace(r.db_id, PairKey(r.anchor_id, r.candidate_id)).second) continue;
      ++out.pairs_per_db[r.db_id];
      kept.push_back(std::move(r));
    }
    out.records = std::move(kept);
  }
  return out;
}

/// Moves `n` records, chosen with a seeded stream, into a held-out set. Both
/// halves keep their original order.
inline std::pair<std::vector<PairRecord>, std::vector<PairRecord>> split_holdout(std::vector<PairRecord> records,
                                                                                 std::size_t n,
                                                                                 std::uint64_t seed) {
  std::vector<std::size_t> idx(records.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  SampleStream stream(SampleStream::derive(seed, "holdout"));
  stream.sample_in_place(idx, n);
  std::vector<bool> held(records.size(), false);
  for (auto i : idx) held[i] = true;
  std::vector<PairRecord> train;
  std::vector<PairRecord> holdout;
  for (std::size_t i = 0; i < records.size(); ++i) (held[i] ? holdout : train).push_back(std::move(records[i]));
  return {std::move(train), std::move(holdout)};
}

inline std::filesystem::path metadata_path(const std::filesystem::path& corpus_path) {
  return std::filesystem::path(corpus_path.string() + ".meta.json");
}

inline nlohmann::json corpus_metadata(const CorpusOptions& options, const CorpusBuild& build,
                                      const EmbeddingSource& embeddings) {
  nlohmann::json meta;
  meta["tool"] = "sqlsim";
  meta["tool_version"] = std::string(kVersion);
  meta["seed"] = options.seed;
  meta["k"] = options.k;
  meta["normalization_scope"] = std::string(scope_name(options.scope));
  meta["global_max_distance"] = build.global_max_distance;
  meta["rescaling_rule"] = std::string(kRescaleRule);
  meta["jaccard"] = options.jaccard == JaccardMode::Combined ? "combined" : "averaged";
  meta["edit_costs"] = "unit";
  meta["schema_serialization"] = "ddl-v1";
  meta["sampler"] = "mt19937_64 + rejection, per-db seed splitmix64(seed ^ splitmix64(fnv1a64(db_id)))";
  meta["embedding_provider"] = embeddings.provider();
  meta["dedupe"] = options.dedupe;
  meta["on_error"] = options.on_error == ErrorPolicy::Fail ? "fail" : "skip";
  meta["record_count"] = build.records.size();
  meta["pairs_per_db"] = build.pairs_per_db;
  meta["skipped"] = build.skipped;
  return meta;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes one JSON record per line, plus `<out>.meta.json` holding `metadata`
/// and a `created_at` timestamp. Returns the number of records written.
inline std::size_t emit_corpus(std::span<const PairRecord> records, const std::filesystem::path& out_path,
                               nlohmann::json metadata = nlohmann::json::object()) {
  if (records.empty()) throw Error("refusing to write an empty corpus to " + out_path.string());
  {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + out_path.string() + " for writing");
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw Error("write failed: " + out_path.string());
  }
  metadata["created_at"] = utc_timestamp();
  const auto meta_path = metadata_path(out_path);
  std::ofstream meta(meta_path, std::ios::binary | std::ios::trunc);
  if (!meta) throw Error("cannot open " + meta_path.string() + " for writing");
  meta << metadata.dump(2) << '\n';
  if (!meta) throw Error("write failed: " + meta_path.string());
  return records.size();
}

inline std::vector<PairRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<PairRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sqlsim
