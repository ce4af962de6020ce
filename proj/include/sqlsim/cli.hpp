#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "sqlsim/corpus.hpp"
#include "sqlsim/embedding.hpp"
#include "sqlsim/errors.hpp"
#include "sqlsim/evalrank.hpp"
#include "sqlsim/parallel.hpp"
#include "sqlsim/selector.hpp"
#include "sqlsim/similarity.hpp"
#include "sqlsim/skeleton.hpp"
#include "sqlsim/tree_edit.hpp"
#include "sqlsim/version.hpp"

namespace sqlsim::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

struct GlobalFlags {
  unsigned jobs = default_jobs();
  bool pretty = false;
  std::string log_level = "warn";
};

struct SkeletonArgs {
  std::string sql;
  std::string file;
  std::string render = "sexpr";
};

struct DistanceArgs {
  std::string sql_a;
  std::string sql_b;
  std::string pool;
};

struct ScorePairsArgs {
  std::string dataset;
  std::string tables;
  std::string embeddings;
  std::string db;
  std::string out;
  std::string on_error = "fail";
  std::string jaccard = "combined";
};

struct BuildCorpusArgs {
  std::string data;
  std::string tables;
  std::string embeddings;
  std::size_t k = 20;
  std::uint64_t seed = 0;
  std::string out;
  bool dedupe = false;
  std::string on_error = "fail";
  std::string scope = "database";
  std::string jaccard = "combined";
  std::size_t holdout = 0;
};

struct EvaluateArgs {
  std::string oracle;
  std::string pred;
  std::string baseline;
  std::string ks = "1,5,10,15,20";
  std::string report;
  bool logits = false;
};

struct SelectArgs {
  std::string data;
  std::string tables;
  std::string db;
  std::string question;
  std::string sql;
  std::string scorer = "oracle";
  std::size_t k = 1;
  bool emit_prompt = false;
  std::string embeddings;
  std::string scores;
  std::optional<long long> target_id;
  std::string jaccard = "combined";
};

namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

inline JaccardMode jaccard_mode(const std::string& s) {
  return s == "averaged" ? JaccardMode::Averaged : JaccardMode::Combined;
}

inline ErrorPolicy error_policy(const std::string& s) { return s == "skip" ? ErrorPolicy::Skip : ErrorPolicy::Fail; }

/// Owns an optional embedding table and the source that reads from it.
struct Embeddings {
  std::unique_ptr<EmbeddingTable> table;
  EmbeddingSource source;
};

inline Embeddings load_embeddings(const std::string& path, spdlog::logger& log) {
  Embeddings e;
  if (path.empty()) {
    log.info("no embedding file given; using provider={}", hashed_provider_name());
    return e;
  }
  e.table = std::make_unique<EmbeddingTable>(EmbeddingTable::load_jsonl(path));
  e.source = EmbeddingSource(e.table.get());
  log.info("loaded embeddings path={} count={} provider={}", path, e.table->size(), e.table->providers());
  return e;
}

inline std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v == 0) throw CLI::ValidationError("--ks", "bad k value '" + part + "'");
    ks.push_back(static_cast<std::size_t>(v));
  }
  if (ks.empty()) throw CLI::ValidationError("--ks", "empty list");
  return ks;
}

/// Pool file for `distance --pool`: JSONL objects with "sql" (or "query")
/// and an optional integer "id" (defaults to the line's position).
inline std::vector<QuestionSqlPair> read_sql_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<QuestionSqlPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      QuestionSqlPair ex;
      ex.id = obj.value("id", static_cast<long long>(out.size()));
      ex.sql = obj.contains("sql") ? obj.at("sql").get<std::string>() : obj.at("query").get<std::string>();
      ex.question = obj.value("question", std::string());
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::string opt_cell(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "n/a"; }

}  // namespace detail

inline int cmd_skeleton(const SkeletonArgs& a, std::ostream& out) {
  const std::string sql = a.file.empty() ? a.sql : detail::read_text_file(a.file);
  const SkeletonTree tree = skeleton_of(sql);
  if (a.render == "tree")
    out << render_skeleton_tree(tree);  // already newline-terminated
  else
    out << render_skeleton(tree) << '\n';
  return kOk;
}

inline int cmd_distance(const DistanceArgs& a, const GlobalFlags& g, std::ostream& out) {
  if (a.pool.empty()) {
    out << tree_edit_distance(OrderedLabeledTree(skeleton_of(a.sql_a)), OrderedLabeledTree(skeleton_of(a.sql_b)))
        << '\n';
    return kOk;
  }
  const auto pool = detail::read_sql_pool(a.pool);
  std::vector<OrderedLabeledTree> trees;
  std::vector<long long> ids;
  for (const auto& ex : pool) {
    try {
      trees.emplace_back(skeleton_of(ex.sql));
    } catch (const ParseError& e) {
      const std::string what = e.what();
      const auto detail = what.substr(what.find(": ") + 2);
      throw ParseError(e.offset(), detail + " (pool entry " + std::to_string(ex.id) + ")");
    }
    ids.push_back(ex.id);
  }
  const DistanceMatrix m = pairwise_distances(trees, g.jobs);
  const auto sims = m.normalized();
  const std::size_t n = m.size();
  if (g.pretty) {
    out << fmt::format("{:>8}", "");
    for (auto id : ids) out << fmt::format(" {:>8}", id);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      out << fmt::format("{:>8}", ids[i]);
      for (std::size_t j = 0; j < n; ++j) out << fmt::format(" {:>8.4f}", sims[i * n + j]);
      out << '\n';
    }
    out << "d_max = " << m.max() << '\n';
    return kOk;
  }
  nlohmann::json j;
  j["ids"] = ids;
  j["d_max"] = m.max();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) rows.push_back(std::vector<double>(sims.begin() + i * n, sims.begin() + (i + 1) * n));
  j["similarity"] = rows;
  out << j.dump() << '\n';
  return kOk;
}

inline int cmd_score_pairs(const ScorePairsArgs& a, const GlobalFlags& g, std::ostream& out, spdlog::logger& log) {
  const Dataset ds = load_dataset(a.dataset, a.tables);
  auto it = ds.catalogs.find(a.db);
  if (it == ds.catalogs.end()) throw MissingCatalog({a.db});
  const auto pool = ds.for_db(a.db);
  if (pool.empty()) throw EmptyPool();
  const auto emb = detail::load_embeddings(a.embeddings, log);
  const ScoreOptions opts{detail::error_policy(a.on_error), detail::jaccard_mode(a.jaccard), g.jobs};
  const PoolAnalysis analysis = PoolAnalysis::prepare(pool, it->second, emb.source, opts);
  for (const auto& s : analysis.skipped()) log.warn("skipped {}", s);

  std::string body;
  const auto& entries = analysis.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const PairKey key(entries[i].example.id, entries[j].example.id);
      const SimilarityLabel l = analysis.label(i, j);
      nlohmann::json row = {{"id_a", key.lo},           {"id_b", key.hi},
                            {"question_sim", l.question_sim}, {"skeleton_sim", l.skeleton_sim},
                            {"link_sim", l.link_sim},     {"mean", l.mean}};
      body += row.dump() + "\n";
    }
  }
  // Entries are in id order, so (i, j) with i < j already yields sorted keys.
  nlohmann::json meta = {{"tool", "sqlsim"},
                         {"tool_version", std::string(kVersion)},
                         {"db_id", a.db},
                         {"pool_size", entries.size()},
                         {"d_max", analysis.max_distance()},
                         {"rescaling_rule", std::string(kRescaleRule)},
                         {"jaccard", a.jaccard},
                         {"on_error", a.on_error},
                         {"embedding_provider", emb.source.provider()},
                         {"skipped", analysis.skipped()}};
  if (a.out.empty()) {
    out << body;
  } else {
    detail::write_text_file(a.out, body);
    detail::write_text_file(metadata_path(a.out), meta.dump(2) + "\n");
    log.info("wrote pairs path={} pairs={}", a.out, entries.size() * (entries.size() - (entries.empty() ? 0 : 1)) / 2);
  }
  return kOk;
}

inline int cmd_build_corpus(const BuildCorpusArgs& a, const GlobalFlags& g, std::ostream& out, spdlog::logger& log) {
  const Dataset ds = load_dataset(a.data, a.tables);
  log.info("loaded dataset path={} examples={} databases={}", a.data, ds.examples.size(), ds.catalogs.size());
  const auto emb = detail::load_embeddings(a.embeddings, log);

  CorpusOptions opts;
  opts.k = a.k;
  opts.seed = a.seed;
  opts.scope = a.scope == "global" ? NormalizationScope::Global : NormalizationScope::Database;
  opts.jaccard = detail::jaccard_mode(a.jaccard);
  opts.on_error = detail::error_policy(a.on_error);
  opts.dedupe = a.dedupe;
  opts.jobs = g.jobs;

  CorpusBuild build = generate_pairs(ds, emb.source, opts);
  for (const auto& s : build.skipped) log.warn("skipped {}", s);
  nlohmann::json meta = corpus_metadata(opts, build, emb.source);
  meta["inputs"] = {{"data", a.data}, {"tables", a.tables}, {"embeddings", a.embeddings}};

  std::vector<PairRecord> records = std::move(build.records);
  std::size_t held = 0;
  std::filesystem::path holdout_path;
  if (a.holdout > 0) {
    if (a.holdout >= records.size())
      throw Error("holdout of " + std::to_string(a.holdout) + " leaves no training records");
    auto [train, holdout] = split_holdout(std::move(records), a.holdout, a.seed);
    records = std::move(train);
    held = holdout.size();
    holdout_path = std::filesystem::path(a.out).replace_extension(".holdout.jsonl");
    nlohmann::json hmeta = meta;
    hmeta["split"] = "holdout";
    hmeta["record_count"] = holdout.size();
    emit_corpus(holdout, holdout_path, hmeta);
    meta["holdout"] = {{"count", held}, {"path", holdout_path.string()}};
  }
  meta["split"] = a.holdout > 0 ? "train" : "all";
  meta["record_count"] = records.size();
  const std::size_t written = emit_corpus(records, a.out, meta);
  log.info("wrote corpus path={} records={}", a.out, written);

  if (g.pretty) {
    out << fmt::format("{:<24} {:>10}\n", "database", "pairs");
    for (const auto& [db, n] : build.pairs_per_db) out << fmt::format("{:<24} {:>10}\n", db, n);
    out << fmt::format("{:<24} {:>10}\n", "written", written);
    if (held) out << fmt::format("{:<24} {:>10}\n", "held out", held);
    return kOk;
  }
  nlohmann::json summary = {{"out", a.out}, {"records", written}, {"pairs_per_db", build.pairs_per_db}};
  if (held) summary["holdout"] = {{"out", holdout_path.string()}, {"records", held}};
  out << summary.dump() << '\n';
  return kOk;
}

inline int cmd_evaluate(const EvaluateArgs& a, const GlobalFlags& g, std::ostream& out, spdlog::logger& log) {
  const auto ks = detail::parse_ks(a.ks);
  const auto oracle = read_corpus(a.oracle);
  log.info("loaded oracle path={} records={}", a.oracle, oracle.size());
  PredictionSet predictions;
  if (!a.pred.empty()) {
    predictions = load_predictions(a.pred, a.logits);
  } else {
    const Baseline b = a.baseline == "question" ? Baseline::Question
                       : a.baseline == "link"   ? Baseline::Link
                                                : Baseline::Skeleton;
    predictions = baseline_predictions(oracle, b);
  }
  const RankingReport report = evaluate(predictions, oracle, ks, g.jobs);
  nlohmann::json j = to_json(report);
  j["config"] = {{"oracle", a.oracle},
                 {"predictions", a.pred.empty() ? "baseline:" + a.baseline : a.pred},
                 {"logits", a.logits},
                 {"tool_version", std::string(kVersion)}};
  if (!a.report.empty()) detail::write_text_file(a.report, j.dump(2) + "\n");

  if (g.pretty) {
    out << fmt::format("{:<22} {}\n", "anchors", report.n_anchors);
    out << fmt::format("{:<22} {} (excluded: {} constant reference, {} constant prediction, {} too few)\n",
                       "tau anchors", report.n_tau, report.excluded_constant_reference,
                       report.excluded_constant_prediction, report.excluded_too_few);
    out << fmt::format("{:<22} {}\n", "mean kendall tau", detail::opt_cell(report.mean_kendall_tau));
    for (auto k : report.ks)
      out << fmt::format("{:<22} {} (n={})\n", "mean p@" + std::to_string(k),
                         detail::opt_cell(report.mean_precision.at(k)), report.n_precision.at(k));
    out << fmt::format("{:<22} {:.6f}\n", "mae", report.mae);
  } else if (a.report.empty()) {
    out << j.dump() << '\n';
  }
  return kOk;
}

inline int cmd_select(const SelectArgs& a, const GlobalFlags& g, std::ostream& out, spdlog::logger& log) {
  const Dataset ds = load_dataset(a.data, a.tables);
  auto it = ds.catalogs.find(a.db);
  if (it == ds.catalogs.end()) throw MissingCatalog({a.db});
  const auto pool = ds.for_db(a.db);
  const auto emb = detail::load_embeddings(a.embeddings, log);

  std::map<long long, double> external;
  SelectOptions opts;
  opts.scorer = *parse_scorer(a.scorer);
  opts.k = a.k;
  opts.embeddings = emb.source;
  opts.jaccard = detail::jaccard_mode(a.jaccard);
  opts.jobs = g.jobs;
  if (!a.scores.empty()) {
    std::ifstream in(a.scores);
    if (!in) throw Error("cannot open " + a.scores);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const auto obj = nlohmann::json::parse(line);
        external[obj.at("candidate_id").get<long long>()] = obj.at("score").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(a.scores + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    opts.external = &external;
  }

  SelectionTarget target{a.question, a.sql.empty() ? std::nullopt : std::optional<std::string>(a.sql), a.target_id};
  const auto ranked = select_top_k(target, pool, it->second, opts);

  if (a.emit_prompt) {
    out << build_prompt(ranked, a.question, it->second);
    return kOk;
  }
  if (g.pretty) {
    out << fmt::format("{:>4} {:>8} {:>8}  {}\n", "rank", "id", "score", "question");
    for (std::size_t i = 0; i < ranked.size(); ++i)
      out << fmt::format("{:>4} {:>8} {:>8.4f}  {}\n", i + 1, ranked[i].candidate.id, ranked[i].score,
                         ranked[i].candidate.question);
    return kOk;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : ranked) {
    nlohmann::json row = {{"id", c.candidate.id},
                          {"question", c.candidate.question},
                          {"sql", c.candidate.sql},
                          {"score", c.score}};
    if (c.components)
      row["components"] = {{"question_sim", c.components->question_sim},
                           {"skeleton_sim", c.components->skeleton_sim},
                           {"link_sim", c.components->link_sim},
                           {"mean", c.components->mean}};
    rows.push_back(row);
  }
  nlohmann::json j = {{"config",
                       {{"db_id", a.db},
                        {"scorer", a.scorer},
                        {"k", a.k},
                        {"embedding_provider", emb.source.provider()},
                        {"rescaling_rule", std::string(kRescaleRule)}}},
                      {"selected", rows}};
  out << j.dump() << '\n';
  return kOk;
}

/// Entry point. Data goes to `out`, diagnostics to `err`. Returns 0 on
/// success, 1 on runtime failure, 2 on bad usage or unparseable SQL.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Structural similarity for question/SQL pairs", "sqlsim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--jobs", g.jobs, "Worker threads (default: all cores)")->check(CLI::Range(1u, 4096u));
  app.add_flag("--pretty", g.pretty, "Human-readable tables instead of JSON");
  app.add_option("--log-level", g.log_level, "Diagnostics on stderr")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  SkeletonArgs sk;
  auto* skeleton = app.add_subcommand("skeleton", "Print the masked skeleton of a query");
  auto* sk_sql = skeleton->add_option("--sql", sk.sql, "SQL text");
  auto* sk_file = skeleton->add_option("--file", sk.file, "File holding the SQL")->check(CLI::ExistingFile);
  sk_sql->excludes(sk_file);
  skeleton->add_option("--render", sk.render)->check(CLI::IsMember({"sexpr", "tree"}));

  DistanceArgs di;
  auto* distance = app.add_subcommand("distance", "Skeleton edit distance of two queries, or a pool's similarity matrix");
  auto* di_a = distance->add_option("--sql-a", di.sql_a);
  auto* di_b = distance->add_option("--sql-b", di.sql_b);
  auto* di_pool = distance->add_option("--pool", di.pool, "JSONL with {id, sql} per line")->check(CLI::ExistingFile);
  di_a->needs(di_b);
  di_b->needs(di_a);
  di_pool->excludes(di_a)->excludes(di_b);

  ScorePairsArgs sp;
  auto* score_pairs = app.add_subcommand("score-pairs", "Label every pair of one database's examples");
  score_pairs->add_option("--dataset,--data", sp.dataset)->required()->check(CLI::ExistingFile);
  score_pairs->add_option("--tables", sp.tables)->required()->check(CLI::ExistingFile);
  score_pairs->add_option("--embeddings", sp.embeddings)->check(CLI::ExistingFile);
  score_pairs->add_option("--db", sp.db)->required();
  score_pairs->add_option("--out", sp.out);
  score_pairs->add_option("--on-error", sp.on_error)->check(CLI::IsMember({"fail", "skip"}));
  score_pairs->add_option("--jaccard", sp.jaccard)->check(CLI::IsMember({"combined", "averaged"}));

  BuildCorpusArgs bc;
  auto* build_corpus = app.add_subcommand("build-corpus", "Sample and label anchor/candidate pairs");
  build_corpus->add_option("--data", bc.data)->required()->check(CLI::ExistingFile);
  build_corpus->add_option("--tables", bc.tables)->required()->check(CLI::ExistingFile);
  build_corpus->add_option("--embeddings", bc.embeddings)->check(CLI::ExistingFile);
  build_corpus->add_option("--k", bc.k)->check(CLI::PositiveNumber);
  build_corpus->add_option("--seed", bc.seed);
  build_corpus->add_option("--out", bc.out)->required();
  build_corpus->add_flag("--dedupe", bc.dedupe);
  build_corpus->add_option("--on-error", bc.on_error)->check(CLI::IsMember({"fail", "skip"}));
  build_corpus->add_option("--scope", bc.scope, "Skeleton normalization pool")
      ->check(CLI::IsMember({"database", "global"}));
  build_corpus->add_option("--jaccard", bc.jaccard)->check(CLI::IsMember({"combined", "averaged"}));
  build_corpus->add_option("--holdout", bc.holdout, "Records to move into <out>.holdout.jsonl");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Rank agreement of predictions with the oracle labels");
  evaluate_cmd->add_option("--oracle", ev.oracle)->required()->check(CLI::ExistingFile);
  auto* ev_pred = evaluate_cmd->add_option("--pred", ev.pred, "JSONL {anchor_id, candidate_id, score}")
                      ->check(CLI::ExistingFile);
  auto* ev_base = evaluate_cmd->add_option("--baseline", ev.baseline, "Score with one oracle component")
                      ->check(CLI::IsMember({"question", "skeleton", "link"}));
  ev_pred->excludes(ev_base);
  evaluate_cmd->add_option("--ks", ev.ks);
  evaluate_cmd->add_option("--report", ev.report);
  evaluate_cmd->add_flag("--logits", ev.logits, "Scores are logits; apply the sigmoid");

  SelectArgs se;
  auto* select = app.add_subcommand("select", "Pick in-domain examples for a question");
  select->add_option("--data", se.data)->required()->check(CLI::ExistingFile);
  select->add_option("--tables", se.tables)->required()->check(CLI::ExistingFile);
  select->add_option("--db", se.db)->required();
  select->add_option("--question", se.question)->required();
  select->add_option("--sql", se.sql, "Gold SQL of the target");
  select->add_option("--scorer", se.scorer)->check(CLI::IsMember({"oracle", "skeleton", "link", "embed", "file"}));
  select->add_option("--k", se.k);
  select->add_flag("--emit-prompt", se.emit_prompt);
  select->add_option("--embeddings", se.embeddings)->check(CLI::ExistingFile);
  select->add_option("--scores", se.scores, "JSONL {candidate_id, score} for --scorer file")->check(CLI::ExistingFile);
  select->add_option("--target-id", se.target_id, "Dataset id of the target; excluded from the pool");
  select->add_option("--jaccard", se.jaccard)->check(CLI::IsMember({"combined", "averaged"}));

  try {
    app.parse(argc, argv);
    if (*skeleton && sk.sql.empty() && sk.file.empty())
      throw CLI::RequiredError("skeleton needs --sql or --file");
    if (*distance && di.pool.empty() && di.sql_a.empty())
      throw CLI::RequiredError("distance needs --sql-a/--sql-b or --pool");
    if (*evaluate_cmd && ev.pred.empty() && ev.baseline.empty())
      throw CLI::RequiredError("evaluate needs --pred or --baseline");
    if (*evaluate_cmd) detail::parse_ks(ev.ks);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failed->help();
    return kUsageError;
  }

  auto log = std::make_shared<spdlog::logger>("sqlsim", std::make_shared<spdlog::sinks::ostream_sink_mt>(err));
  log->set_pattern("%Y-%m-%dT%H:%M:%S.%e %l %v");
  log->set_level(spdlog::level::from_str(g.log_level));
  log->debug("start jobs={} version={}", g.jobs, kVersion);

  try {
    if (*skeleton) return cmd_skeleton(sk, out);
    if (*distance) return cmd_distance(di, g, out);
    if (*score_pairs) return cmd_score_pairs(sp, g, out, *log);
    if (*build_corpus) return cmd_build_corpus(bc, g, out, *log);
    if (*evaluate_cmd) return cmd_evaluate(ev, g, out, *log);
    if (*select) return cmd_select(se, g, out, *log);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace sqlsim::cli
