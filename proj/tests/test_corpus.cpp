#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "sqlsim/corpus.hpp"
#include "test_support.hpp"

using sqlsim::CorpusOptions;
using sqlsim::EmbeddingSource;
using sqlsim::PairRecord;

namespace {

const sqlsim::Dataset& fixture() {
  static const auto ds = sqlsim::load_dataset(sqlsim::testing::data_path("dataset.json"),
                                              sqlsim::testing::data_path("tables.json"));
  return ds;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sqlsim_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto p = temp_file(name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST(Dataset, LoadsFixture) {
  const auto& ds = fixture();
  EXPECT_EQ(ds.examples.size(), 36u);
  EXPECT_EQ(ds.for_db("concert_singer").size(), 6u);
  EXPECT_EQ(ds.for_db("school").size(), 30u);
  EXPECT_EQ(ds.examples[6].id, 6);
  EXPECT_EQ(ds.examples[6].db_id, "school");
  EXPECT_EQ(ds.db_ids(), (std::vector<std::string>{"concert_singer", "school"}));
}

TEST(Dataset, AcceptsAlternativeSqlKeys) {
  const auto doc = nlohmann::json::parse(R"([
    {"question": "q", "SQL": "SELECT name FROM singer", "db_id": "concert_singer"},
    {"question": "r", "sql": "SELECT age FROM singer", "db_id": "concert_singer"}])");
  const auto ds = sqlsim::dataset_from_json(doc, fixture().catalogs);
  EXPECT_EQ(ds.examples[0].sql, "SELECT name FROM singer");
  EXPECT_EQ(ds.examples[1].sql, "SELECT age FROM singer");
}

TEST(Dataset, MalformedRecordNamesItsIndex) {
  const auto doc = nlohmann::json::parse(R"([
    {"question": "q", "query": "SELECT 1", "db_id": "concert_singer"},
    {"question": "q", "db_id": "concert_singer"}])");
  try {
    sqlsim::dataset_from_json(doc, fixture().catalogs);
    FAIL();
  } catch (const sqlsim::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos) << e.what();
  }
}

TEST(Dataset, MissingCatalogListsDatabases) {
  const auto doc = nlohmann::json::parse(R"([
    {"question": "q", "query": "SELECT 1", "db_id": "zoo"},
    {"question": "q", "query": "SELECT 1", "db_id": "bank"}])");
  try {
    sqlsim::dataset_from_json(doc, fixture().catalogs);
    FAIL();
  } catch (const sqlsim::MissingCatalog& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("zoo"), std::string::npos);
    EXPECT_NE(what.find("bank"), std::string::npos);
  }
}

TEST(GeneratePairs, CountFormula) {
  CorpusOptions opts;
  opts.k = 20;
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  EXPECT_EQ(build.pairs_per_db.at("concert_singer"), 6u * 5u);
  EXPECT_EQ(build.pairs_per_db.at("school"), 30u * 20u);
  EXPECT_EQ(build.records.size(), 630u);
}

TEST(GeneratePairs, SmallK) {
  CorpusOptions opts;
  opts.k = 3;
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  EXPECT_EQ(build.records.size(), 6u * 3u + 30u * 3u);
}

TEST(GeneratePairs, InDomainSortedAndWellFormed) {
  CorpusOptions opts;
  opts.seed = 17;
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  const auto& ex = fixture().examples;
  std::set<std::tuple<std::string, long long, long long>> seen;
  for (std::size_t i = 0; i < build.records.size(); ++i) {
    const PairRecord& r = build.records[i];
    EXPECT_NE(r.anchor_id, r.candidate_id);
    EXPECT_EQ(ex[r.anchor_id].db_id, r.db_id);
    EXPECT_EQ(ex[r.candidate_id].db_id, r.db_id);
    EXPECT_EQ(r.question_1, ex[r.anchor_id].question);
    EXPECT_EQ(r.question_2, ex[r.candidate_id].question);
    EXPECT_EQ(r.label, r.components.mean);
    EXPECT_TRUE(sqlsim::is_mean_of_components(r.components));
    EXPECT_TRUE(seen.emplace(r.db_id, r.anchor_id, r.candidate_id).second) << "repeated candidate";
    if (i) {
      const auto& p = build.records[i - 1];
      EXPECT_LT(std::tie(p.db_id, p.anchor_id, p.candidate_id), std::tie(r.db_id, r.anchor_id, r.candidate_id));
    }
  }
  EXPECT_EQ(build.records.front().schema_ddl, sqlsim::serialize_schema_ddl(fixture().catalogs.at("concert_singer")));
}

TEST(GeneratePairs, DeterministicPerSeed) {
  CorpusOptions opts;
  opts.seed = 5;
  const auto a = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  opts.jobs = 5;
  const auto b = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  EXPECT_EQ(a.records, b.records);
  opts.seed = 6;
  const auto c = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  EXPECT_NE(a.records, c.records);
}

TEST(SampleStream, ReproducibleDistinctDraws) {
  sqlsim::SampleStream s(sqlsim::SampleStream::derive(0, "school"));
  std::vector<int> v(29);
  for (int i = 0; i < 29; ++i) v[i] = i;
  s.sample_in_place(v, 5);
  ASSERT_EQ(v.size(), 5u);
  std::set<int> uniq(v.begin(), v.end());
  EXPECT_EQ(uniq.size(), 5u);
  sqlsim::SampleStream again(sqlsim::SampleStream::derive(0, "school"));
  std::vector<int> w(29);
  for (int i = 0; i < 29; ++i) w[i] = i;
  again.sample_in_place(w, 5);
  EXPECT_EQ(v, w);
}

TEST(GeneratePairs, GlobalScopeUsesLargestDistance) {
  CorpusOptions db;
  CorpusOptions global;
  global.scope = sqlsim::NormalizationScope::Global;
  const auto a = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, db);
  const auto b = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, global);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].candidate_id, b.records[i].candidate_id);
    EXPECT_EQ(a.records[i].components.link_sim, b.records[i].components.link_sim);
    EXPECT_GE(b.records[i].components.skeleton_sim, a.records[i].components.skeleton_sim - 1e-15);
  }
}

TEST(GeneratePairs, DedupeKeepsFirstDirection) {
  CorpusOptions opts;
  opts.k = 20;
  opts.dedupe = true;
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  EXPECT_EQ(build.pairs_per_db.at("concert_singer"), 15u);  // all 6*5 ordered pairs collapse to 15
  std::set<std::pair<long long, long long>> keys;
  for (const auto& r : build.records)
    EXPECT_TRUE(keys.emplace(std::min(r.anchor_id, r.candidate_id), std::max(r.anchor_id, r.candidate_id)).second);
}

TEST(GeneratePairs, SingletonDatabaseContributesNothing) {
  sqlsim::Dataset ds = fixture();
  ds.examples.resize(7);  // six concert_singer examples and one school example
  const auto build = sqlsim::generate_pairs(ds, EmbeddingSource{}, CorpusOptions{});
  EXPECT_EQ(build.pairs_per_db.at("school"), 0u);
  EXPECT_EQ(build.records.size(), 30u);
}

TEST(EmitCorpus, RoundTripAndByteStability) {
  CorpusOptions opts;
  opts.seed = 99;
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  const auto p1 = temp_file("corpus1.jsonl");
  const auto p2 = temp_file("corpus2.jsonl");
  EXPECT_EQ(sqlsim::emit_corpus(build.records, p1, sqlsim::corpus_metadata(opts, build, EmbeddingSource{})), 630u);
  const auto again = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, opts);
  sqlsim::emit_corpus(again.records, p2);
  EXPECT_EQ(slurp(p1), slurp(p2));
  EXPECT_EQ(sqlsim::read_corpus(p1), build.records);

  const auto meta = sqlsim::read_json_file(sqlsim::metadata_path(p1));
  EXPECT_EQ(meta.at("seed").get<std::uint64_t>(), 99u);
  EXPECT_EQ(meta.at("k").get<std::size_t>(), 20u);
  EXPECT_EQ(meta.at("normalization_scope"), "database");
  EXPECT_EQ(meta.at("rescaling_rule"), "(cos+1)/2");
  EXPECT_EQ(meta.at("tool_version"), std::string(sqlsim::kVersion));
  EXPECT_TRUE(meta.contains("created_at"));
  for (const auto& p : {p1, p2}) {
    std::filesystem::remove(p);
    std::filesystem::remove(sqlsim::metadata_path(p));
  }
}

TEST(EmitCorpus, RejectsEmptyAndUnwritable) {
  EXPECT_THROW(sqlsim::emit_corpus({}, temp_file("empty.jsonl")), sqlsim::Error);
  PairRecord r;
  r.anchor_id = 0;
  r.candidate_id = 1;
  const std::vector<PairRecord> one = {r};
  try {
    sqlsim::emit_corpus(one, "/nonexistent-dir/out.jsonl");
    FAIL();
  } catch (const sqlsim::Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/out.jsonl"), std::string::npos);
  }
}

TEST(ReadCorpus, RechecksLabels) {
  PairRecord r;
  r.db_id = "d";
  r.anchor_id = 0;
  r.candidate_id = 1;
  r.components = sqlsim::SimilarityLabel::combine(0.5, 0.25, 1.0);
  r.label = r.components.mean;
  auto good = sqlsim::to_json(r);
  const auto ok = write_temp("good.jsonl", good.dump() + "\n");
  EXPECT_EQ(sqlsim::read_corpus(ok).front(), r);

  auto bad_label = good;
  bad_label["label"] = 0.9;
  const auto p = write_temp("bad_label.jsonl", good.dump() + "\n" + bad_label.dump() + "\n");
  try {
    sqlsim::read_corpus(p);
    FAIL();
  } catch (const sqlsim::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }

  auto bad_mean = good;
  bad_mean["components"]["mean"] = 0.6;
  bad_mean["label"] = 0.6;
  EXPECT_THROW(sqlsim::read_corpus(write_temp("bad_mean.jsonl", bad_mean.dump() + "\n")), sqlsim::FormatError);
  for (const char* n : {"good.jsonl", "bad_label.jsonl", "bad_mean.jsonl"}) std::filesystem::remove(temp_file(n));
}

TEST(Holdout, SplitsDeterministically) {
  const auto build = sqlsim::generate_pairs(fixture(), EmbeddingSource{}, CorpusOptions{});
  const auto [train, held] = sqlsim::split_holdout(build.records, 100, 3);
  EXPECT_EQ(train.size(), 530u);
  EXPECT_EQ(held.size(), 100u);
  const auto [train2, held2] = sqlsim::split_holdout(build.records, 100, 3);
  EXPECT_EQ(held, held2);
}
