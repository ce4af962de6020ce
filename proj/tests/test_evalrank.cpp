#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sqlsim/evalrank.hpp"
#include "test_support.hpp"

using sqlsim::kendall_tau;
using sqlsim::PairRecord;
using sqlsim::precision_at_k;
using sqlsim::PredictionSet;

namespace {

using V = std::vector<double>;

PairRecord record(long long anchor, long long candidate, double label) {
  PairRecord r;
  r.db_id = "d";
  r.anchor_id = anchor;
  r.candidate_id = candidate;
  r.components = {label, label, label, label};
  r.label = label;
  return r;
}

}  // namespace

TEST(KendallTau, HandEnumeratedFourElements) {
  // Pairs of (1,2,3,4) vs (1,2,4,3): five concordant, one discordant.
  const auto t = kendall_tau(V{1, 2, 3, 4}, V{1, 2, 4, 3});
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 4.0 / 6.0, 1e-9);
  EXPECT_NEAR(*t, 0.6667, 1e-4);
}

TEST(KendallTau, IdentityAndReversal) {
  EXPECT_EQ(*kendall_tau(V{3, 1, 2, 5}, V{3, 1, 2, 5}), 1.0);
  EXPECT_EQ(*kendall_tau(V{1, 2, 3, 4, 5}, V{5, 4, 3, 2, 1}), -1.0);
}

TEST(KendallTau, TieCorrection) {
  // ref (1,1,2), pred (1,2,3): n0 = 3, ties in ref = 1, C = 2, D = 0.
  const auto t = kendall_tau(V{1, 1, 2}, V{1, 2, 3});
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 2.0 / std::sqrt(2.0 * 3.0), 1e-12);
  // Identical vectors with ties still score exactly one.
  EXPECT_EQ(*kendall_tau(V{0.5, 0.5, 0.2, 0.9}, V{0.5, 0.5, 0.2, 0.9}), 1.0);
}

TEST(KendallTau, UndefinedCases) {
  EXPECT_FALSE(kendall_tau(V{1, 1, 1}, V{1, 2, 3}));
  EXPECT_FALSE(kendall_tau(V{1, 2, 3}, V{4, 4, 4}));
  EXPECT_FALSE(kendall_tau(V{1}, V{1}));
  EXPECT_THROW(kendall_tau(V{1, 2}, V{1, 2, 3}), sqlsim::LengthMismatch);
}

TEST(KendallTau, SymmetryAndMonotoneInvariance) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(0, 5);
  for (int i = 0; i < 300; ++i) {
    V a(8);
    V b(8);
    for (auto& x : a) x = d(rng);
    for (auto& x : b) x = d(rng);
    const auto ab = kendall_tau(a, b);
    const auto ba = kendall_tau(b, a);
    ASSERT_EQ(ab.has_value(), ba.has_value());
    if (!ab) continue;
    EXPECT_NEAR(*ab, *ba, 1e-15);
    EXPECT_GE(*ab, -1.0);
    EXPECT_LE(*ab, 1.0);
    V warped(8);
    for (std::size_t k = 0; k < 8; ++k) warped[k] = std::exp(b[k]) * 3 - 7;
    EXPECT_NEAR(*kendall_tau(a, warped), *ab, 1e-15);
    V negated(8);
    for (std::size_t k = 0; k < 8; ++k) negated[k] = -b[k];
    EXPECT_NEAR(*kendall_tau(a, negated), -*ab, 1e-15);
  }
}

TEST(PrecisionAtK, HandEnumerated) {
  // Candidates a,b,c,d. Reference a>b>c>d; predicted b>a>d>c.
  const V ref = {4, 3, 2, 1};
  const V pred = {3, 4, 1, 2};
  EXPECT_EQ(precision_at_k(ref, pred, 2), 1.0);
  EXPECT_EQ(precision_at_k(ref, pred, 1), 0.0);
  EXPECT_EQ(precision_at_k(ref, pred, 3), 2.0 / 3.0);
  EXPECT_EQ(precision_at_k(ref, pred, 4), 1.0);
}

TEST(PrecisionAtK, IdentityDisjointAndErrors) {
  const V x = {0.3, 0.3, 0.1, 0.9, 0.3};
  for (std::size_t k = 1; k <= x.size(); ++k) EXPECT_EQ(precision_at_k(x, x, k), 1.0);
  EXPECT_EQ(precision_at_k(V{1, 1, 0, 0}, V{0, 0, 1, 1}, 2), 0.0);
  EXPECT_THROW(precision_at_k(V{1, 2}, V{1, 2}, 3), sqlsim::KTooLarge);
  EXPECT_THROW(precision_at_k(V{1, 2}, V{1}, 1), sqlsim::LengthMismatch);
}

TEST(PrecisionAtK, TiesBreakByAscendingId) {
  const V ref = {0.5, 0.5, 0.5};
  const V pred = {0.1, 0.2, 0.3};
  const std::vector<long long> ids = {30, 10, 20};
  // Reference top-1 is id 10 (tie broken by id); predicted top-1 is id 20.
  EXPECT_EQ(precision_at_k(ref, pred, ids, 1), 0.0);
  const auto top = sqlsim::top_k_indices(ref, ids, 2);
  EXPECT_EQ(top, (std::vector<std::size_t>{1, 2}));
}

TEST(Mae, Formula) {
  std::map<sqlsim::PairId, double> labels = {{{0, 1}, 0.0}, {{0, 2}, 1.0}};
  PredictionSet p;
  p.insert(0, 1, 0.5);
  p.insert(0, 2, 0.5);
  EXPECT_EQ(sqlsim::mean_absolute_error(p, labels), 0.5);

  PredictionSet same;
  same.insert(0, 1, 0.0);
  same.insert(0, 2, 1.0);
  EXPECT_EQ(sqlsim::mean_absolute_error(same, labels), 0.0);

  std::map<sqlsim::PairId, double> halves = {{{0, 1}, 0.5}, {{0, 2}, 0.5}};
  PredictionSet logits;
  logits.insert(0, 1, 0.0);
  logits.insert(0, 2, 0.0);
  EXPECT_EQ(sqlsim::mean_absolute_error(logits.with_sigmoid(), halves), 0.0);
}

TEST(Mae, MissingReferenceListsKeys) {
  std::map<sqlsim::PairId, double> labels = {{{0, 1}, 0.0}};
  PredictionSet p;
  p.insert(0, 1, 0.0);
  p.insert(5, 6, 0.0);
  try {
    sqlsim::mean_absolute_error(p, labels);
    FAIL();
  } catch (const sqlsim::MissingReference& e) {
    EXPECT_EQ(e.keys(), (std::vector<std::string>{"(5,6)"}));
  }
}

TEST(Sigmoid, Values) {
  EXPECT_EQ(sqlsim::sigmoid(0.0), 0.5);
  EXPECT_NEAR(sqlsim::sigmoid(2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
}

TEST(Evaluate, TransposedFiveCandidateAnchor) {
  // Anchor 0 with candidates 1..5, labels descending in id order. The
  // prediction swaps candidates 2 and 3.
  std::vector<PairRecord> oracle;
  const V labels = {0.9, 0.8, 0.7, 0.6, 0.5};
  for (int c = 1; c <= 5; ++c) oracle.push_back(record(0, c, labels[c - 1]));
  PredictionSet pred;
  const V scores = {0.9, 0.7, 0.8, 0.6, 0.5};
  for (int c = 1; c <= 5; ++c) pred.insert(0, c, scores[c - 1]);

  const auto report = sqlsim::evaluate(pred, oracle, {1, 2, 3, 5});
  ASSERT_EQ(report.anchors.size(), 1u);
  const auto& a = report.anchors.front();
  // 10 pairs, one discordant: (9 - 1) / 10.
  EXPECT_NEAR(*a.kendall_tau, 0.8, 1e-12);
  EXPECT_EQ(a.precision.at(1), 1.0);
  EXPECT_EQ(a.precision.at(2), 0.5);  // {1,2} vs {1,3}
  EXPECT_EQ(a.precision.at(3), 1.0);
  EXPECT_EQ(a.precision.at(5), 1.0);
  EXPECT_FALSE(a.short_list);
  EXPECT_NEAR(report.mae, 0.2 / 5.0, 1e-15);
}

TEST(Evaluate, IdentityAndInversion) {
  std::vector<PairRecord> oracle;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 25; ++c)
      if (c != a) oracle.push_back(record(a, c, ((a * 31 + c * 17) % 97) / 97.0));
  PredictionSet same;
  PredictionSet inverted;
  for (const auto& r : oracle) {
    same.insert(r.anchor_id, r.candidate_id, r.label);
    inverted.insert(r.anchor_id, r.candidate_id, 1.0 - r.label);
  }
  const auto id = sqlsim::evaluate(same, oracle);
  EXPECT_EQ(*id.mean_kendall_tau, 1.0);
  for (const auto& [k, p] : id.mean_precision) EXPECT_EQ(*p, 1.0) << k;
  EXPECT_EQ(id.mae, 0.0);
  const auto inv = sqlsim::evaluate(inverted, oracle);
  EXPECT_EQ(*inv.mean_kendall_tau, -1.0);
}

TEST(Evaluate, ShortListsAndExclusions) {
  std::vector<PairRecord> oracle = {record(0, 1, 0.2), record(0, 2, 0.4), record(0, 3, 0.6),
                                    record(1, 0, 0.5), record(1, 2, 0.5), record(2, 0, 0.1)};
  PredictionSet pred;
  for (const auto& r : oracle) pred.insert(r.anchor_id, r.candidate_id, r.label);
  const auto report = sqlsim::evaluate(pred, oracle, {1, 2, 5});
  EXPECT_EQ(report.n_anchors, 3u);
  EXPECT_EQ(report.n_tau, 1u);
  EXPECT_EQ(report.excluded_constant_reference, 1u);
  EXPECT_EQ(report.excluded_too_few, 1u);
  EXPECT_EQ(report.short_anchors, 3u);
  EXPECT_EQ(report.n_precision.at(1), 3u);
  EXPECT_EQ(report.n_precision.at(2), 2u);
  EXPECT_EQ(report.n_precision.at(5), 0u);
  EXPECT_FALSE(report.mean_precision.at(5).has_value());
  const auto j = sqlsim::to_json(report);
  EXPECT_EQ(j.at("tie_policy"), std::string(sqlsim::kTiePolicy));
  EXPECT_TRUE(j.at("mean_precision").at("p@5").is_null());
}

TEST(Evaluate, CoverageErrors) {
  std::vector<PairRecord> oracle = {record(0, 1, 0.2), record(0, 2, 0.4)};
  PredictionSet partial;
  partial.insert(0, 1, 0.1);
  EXPECT_THROW(sqlsim::evaluate(partial, oracle), sqlsim::MissingReference);
  PredictionSet extra;
  extra.insert(0, 1, 0.1);
  extra.insert(0, 2, 0.1);
  extra.insert(9, 9, 0.1);
  EXPECT_THROW(sqlsim::evaluate(extra, oracle), sqlsim::MissingReference);
}

TEST(Evaluate, IndependentOfJobCount) {
  std::vector<PairRecord> oracle;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  PredictionSet pred;
  for (int a = 0; a < 50; ++a)
    for (int c = 0; c < 21; ++c)
      if (c != a) {
        oracle.push_back(record(a, c, std::round(u(rng) * 10) / 10));
        pred.insert(a, c, u(rng));
      }
  const auto one = sqlsim::to_json(sqlsim::evaluate(pred, oracle, sqlsim::kDefaultKs, 1));
  const auto many = sqlsim::to_json(sqlsim::evaluate(pred, oracle, sqlsim::kDefaultKs, 8));
  EXPECT_EQ(one, many);
}

TEST(Baselines, TakeOneComponent) {
  PairRecord r = record(0, 1, 0.0);
  r.components = sqlsim::SimilarityLabel::combine(0.1, 0.2, 0.3);
  r.label = r.components.mean;
  const std::vector<PairRecord> recs = {r};
  EXPECT_EQ(*sqlsim::baseline_predictions(recs, sqlsim::Baseline::Question).find(0, 1), 0.1);
  EXPECT_EQ(*sqlsim::baseline_predictions(recs, sqlsim::Baseline::Skeleton).find(0, 1), 0.2);
  EXPECT_EQ(*sqlsim::baseline_predictions(recs, sqlsim::Baseline::Link).find(0, 1), 0.3);
}
