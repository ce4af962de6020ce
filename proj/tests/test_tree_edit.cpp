#include <gtest/gtest.h>

#include <random>

#include "sqlsim/tree_edit.hpp"
#include "test_support.hpp"

using sqlsim::EditDistance;
using sqlsim::OrderedLabeledTree;
using sqlsim::SkeletonTree;
using sqlsim::ted_bruteforce;
using sqlsim::tree_edit_distance;

namespace {

SkeletonTree leaf(std::string l) { return {std::move(l), {}}; }
SkeletonTree node(std::string l, std::vector<SkeletonTree> kids) { return {std::move(l), std::move(kids)}; }

EditDistance ted(const SkeletonTree& a, const SkeletonTree& b) {
  return tree_edit_distance(OrderedLabeledTree(a), OrderedLabeledTree(b));
}

}  // namespace

TEST(OrderedLabeledTree, PostorderLeftmostAndKeyroots) {
  // f(d(a, c(b)), e): postorder a b c d e f
  const auto t = node("f", {node("d", {leaf("a"), node("c", {leaf("b")})}), leaf("e")});
  const OrderedLabeledTree o(t);
  ASSERT_EQ(o.size(), 6u);
  const std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  const std::vector<std::size_t> leftmost = {0, 1, 1, 0, 4, 0};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(o.label(i), labels[i]);
    EXPECT_EQ(o.leftmost(i), leftmost[i]);
  }
  const std::vector<std::size_t> keyroots(o.keyroots().begin(), o.keyroots().end());
  EXPECT_EQ(keyroots, (std::vector<std::size_t>{2, 4, 5}));
}

TEST(TreeEditDistance, ClassicExample) {
  // The standard Zhang-Shasha illustration: one delete and one insert.
  const auto a = node("f", {node("d", {leaf("a"), node("c", {leaf("b")})}), leaf("e")});
  const auto b = node("f", {node("c", {node("d", {leaf("a"), leaf("b")})}), leaf("e")});
  EXPECT_EQ(ted(a, b), 2u);
  EXPECT_EQ(ted_bruteforce(a, b), 2u);
}

TEST(TreeEditDistance, SmallHandCases) {
  EXPECT_EQ(ted(leaf("a"), leaf("a")), 0u);
  EXPECT_EQ(ted(leaf("a"), leaf("b")), 1u);
  EXPECT_EQ(ted(leaf("a"), node("a", {leaf("b"), leaf("c")})), 2u);
  // Sibling order matters: swapping two leaves costs two relabels.
  EXPECT_EQ(ted(node("r", {leaf("x"), leaf("y")}), node("r", {leaf("y"), leaf("x")})), 2u);
  // Deleting an inner node promotes its children.
  EXPECT_EQ(ted(node("r", {node("m", {leaf("x"), leaf("y")})}), node("r", {leaf("x"), leaf("y")})), 1u);
}

TEST(TreeEditDistance, SkeletonFixtureDistances) {
  const auto q0 = sqlsim::skeleton_of("SELECT name FROM singer");
  const auto q1 = sqlsim::skeleton_of("SELECT name FROM singer WHERE age > 20");
  const auto q2 = sqlsim::skeleton_of("SELECT COUNT(*) FROM singer");
  EXPECT_EQ(ted(q0, q1), 4u);
  EXPECT_EQ(ted(q0, q2), 2u);
  EXPECT_EQ(ted(q1, q2), 6u);
}

TEST(TreeEditDistance, EmptyTreeThrows) {
  EXPECT_THROW(tree_edit_distance(OrderedLabeledTree{}, OrderedLabeledTree(leaf("a"))), sqlsim::EmptyTree);
  EXPECT_THROW(tree_edit_distance(OrderedLabeledTree(leaf("a")), OrderedLabeledTree{}), sqlsim::EmptyTree);
}

TEST(TreeEditDistance, BruteForceRejectsLargeTrees) {
  std::mt19937_64 rng(3);
  const auto big = sqlsim::testing::random_tree(rng, sqlsim::kBruteForceCap + 1);
  EXPECT_THROW(ted_bruteforce(big, leaf("a")), sqlsim::SizeLimit);
  EXPECT_THROW(ted_bruteforce(leaf("a"), big), sqlsim::SizeLimit);
}

TEST(TreeEditDistance, MatchesBruteForceOnRandomTrees) {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 300; ++i) {
    const auto a = sqlsim::testing::random_tree_upto(rng, 7);
    const auto b = sqlsim::testing::random_tree_upto(rng, 7);
    ASSERT_EQ(ted(a, b), ted_bruteforce(a, b))
        << sqlsim::render_skeleton(a) << " vs " << sqlsim::render_skeleton(b);
  }
}

TEST(TreeEditDistance, SizeBounds) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = sqlsim::testing::random_tree_upto(rng, 12);
    const auto b = sqlsim::testing::random_tree_upto(rng, 12);
    const auto d = ted(a, b);
    const auto na = a.size();
    const auto nb = b.size();
    EXPECT_GE(d, na > nb ? na - nb : nb - na);
    EXPECT_LE(d, std::max(na, nb) + std::min(na, nb) - 1);  // relabel roots, rebuild the rest
  }
}

TEST(TreeEditDistance, MetricAxioms) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 500; ++i) {
    const auto a = sqlsim::testing::random_tree_upto(rng, 8, 3);
    const auto b = sqlsim::testing::random_tree_upto(rng, 8, 3);
    const auto c = sqlsim::testing::random_tree_upto(rng, 8, 3);
    const auto ab = ted(a, b);
    const auto bc = ted(b, c);
    const auto ac = ted(a, c);
    EXPECT_EQ(ted(a, a), 0u);
    EXPECT_EQ(ab, ted(b, a));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_LE(ac, ab + bc);
  }
}

TEST(Normalization, OneMinusRatio) {
  EXPECT_DOUBLE_EQ(sqlsim::normalize_distance(0, 6), 1.0);
  EXPECT_DOUBLE_EQ(sqlsim::normalize_distance(6, 6), 0.0);
  EXPECT_DOUBLE_EQ(sqlsim::normalize_distance(2, 6), 1.0 - 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(sqlsim::normalize_distance(0, 0), 1.0);
}

TEST(Normalization, PoolRangeAndExtremes) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    std::vector<OrderedLabeledTree> trees;
    std::vector<SkeletonTree> raw;
    for (int i = 0; i < 8; ++i) raw.push_back(sqlsim::testing::random_tree_upto(rng, 6, 2));
    raw.push_back(raw.front());  // guarantees an identical pair
    for (const auto& t : raw) trees.emplace_back(t);
    const auto m = sqlsim::pairwise_distances(trees);
    const auto sims = m.normalized();
    const std::size_t n = m.size();
    double lo = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double s = sims[i * n + j];
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        if (i != j) lo = std::min(lo, s);
        if (raw[i] == raw[j]) {
          EXPECT_EQ(s, 1.0);
        }
      }
    }
    if (m.max() > 0) {
      EXPECT_EQ(lo, 0.0);
    }
  }
}

TEST(Normalization, DegeneratePoolIsAllOnes) {
  std::vector<OrderedLabeledTree> trees(3, OrderedLabeledTree(leaf("x")));
  const auto m = sqlsim::pairwise_distances(trees);
  EXPECT_EQ(m.max(), 0u);
  for (double s : m.normalized()) EXPECT_EQ(s, 1.0);
}

TEST(Normalization, PermutationInvariant) {
  const std::vector<EditDistance> d = {3, 0, 5, 2};
  const std::vector<EditDistance> p = {2, 5, 3, 0};
  const auto a = sqlsim::normalize_distances(d);
  const auto b = sqlsim::normalize_distances(p);
  EXPECT_EQ(a[0], b[2]);
  EXPECT_EQ(a[1], b[3]);
  EXPECT_EQ(a[2], b[1]);
  EXPECT_EQ(a[3], b[0]);
}

TEST(PairwiseDistances, IndependentOfJobCount) {
  std::mt19937_64 rng(9);
  std::vector<OrderedLabeledTree> trees;
  for (int i = 0; i < 40; ++i) trees.emplace_back(sqlsim::testing::random_tree_upto(rng, 15));
  const auto one = sqlsim::pairwise_distances(trees, 1);
  const auto many = sqlsim::pairwise_distances(trees, 7);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j) ASSERT_EQ(one.at(i, j), many.at(i, j));
}
