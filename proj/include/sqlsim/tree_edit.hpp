#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqlsim/errors.hpp"
#include "sqlsim/parallel.hpp"

namespace sqlsim {

/// Any recursive tree exposing `label` and an ordered `children` range.
template <typename T>
concept LabeledTree = requires(const T& t) {
  { std::string_view(t.label) };
  { t.children.size() } -> std::convertible_to<std::size_t>;
  requires std::same_as<std::remove_cvref_t<decltype(*t.children.begin())>, T>;
};

/// Unit-cost edit distance (insert = delete = relabel = 1).
using EditDistance = std::size_t;

/// Postorder flattening used by Zhang-Shasha.
///
/// Nodes are numbered 0..size-1 in postorder, root last. `leftmost[i]` is the
/// postorder index of the leftmost leaf descendant of i (so leftmost[i] <= i).
/// `keyroots` holds, for each distinct leftmost value, the highest node having
/// it; equivalently the root plus every node with a left sibling. Ascending.
class OrderedLabeledTree {
 public:
  OrderedLabeledTree() = default;

  template <LabeledTree T>
  explicit OrderedLabeledTree(const T& root) {
    flatten(root);
    std::vector<bool> seen(labels_.size(), false);
    for (std::size_t i = labels_.size(); i-- > 0;) {
      if (!seen[leftmost_[i]]) {
        seen[leftmost_[i]] = true;
        keyroots_.push_back(i);
      }
    }
    std::reverse(keyroots_.begin(), keyroots_.end());
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::size_t leftmost(std::size_t i) const { return leftmost_[i]; }
  std::span<const std::size_t> keyroots() const noexcept { return keyroots_; }

 private:
  template <LabeledTree T>
  std::size_t flatten(const T& node) {
    std::size_t first_leaf = labels_.size();
    bool first = true;
    for (const auto& child : node.children) {
      const std::size_t idx = flatten(child);
      if (first) {
        first_leaf = leftmost_[idx];
        first = false;
      }
    }
    labels_.emplace_back(node.label);
    leftmost_.push_back(first ? labels_.size() - 1 : first_leaf);
    return labels_.size() - 1;
  }

  std::vector<std::string> labels_;
  std::vector<std::size_t> leftmost_;
  std::vector<std::size_t> keyroots_;
};

/// Zhang-Shasha ordered tree edit distance with unit costs.
/// Memory O(|a|*|b|): one tree-distance table plus one forest table reused
/// across keyroot pairs.
inline EditDistance tree_edit_distance(const OrderedLabeledTree& a, const OrderedLabeledTree& b) {
  if (a.empty() || b.empty()) throw EmptyTree();
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  std::vector<EditDistance> tree_dist(n1 * n2, 0);
  std::vector<EditDistance> forest((n1 + 1) * (n2 + 1), 0);
  const std::size_t stride = n2 + 1;

  for (const std::size_t i : a.keyroots()) {
    for (const std::size_t j : b.keyroots()) {
      const std::size_t li = a.leftmost(i);
      const std::size_t lj = b.leftmost(j);
      const std::size_t rows = i - li + 2;
      const std::size_t cols = j - lj + 2;
      forest[0] = 0;
      for (std::size_t x = 1; x < rows; ++x) forest[x * stride] = forest[(x - 1) * stride] + 1;
      for (std::size_t y = 1; y < cols; ++y) forest[y] = forest[y - 1] + 1;
      for (std::size_t x = 1; x < rows; ++x) {
        const std::size_t i1 = li + x - 1;
        for (std::size_t y = 1; y < cols; ++y) {
          const std::size_t j1 = lj + y - 1;
          const EditDistance del = forest[(x - 1) * stride + y] + 1;
          const EditDistance ins = forest[x * stride + y - 1] + 1;
          EditDistance best = std::min(del, ins);
          if (a.leftmost(i1) == li && b.leftmost(j1) == lj) {
            const EditDistance relabel = a.label(i1) == b.label(j1) ? 0 : 1;
            best = std::min(best, forest[(x - 1) * stride + y - 1] + relabel);
            tree_dist[i1 * n2 + j1] = best;
          } else {
            const std::size_t p = a.leftmost(i1) - li;
            const std::size_t q = b.leftmost(j1) - lj;
            best = std::min(best, forest[p * stride + q] + tree_dist[i1 * n2 + j1]);
          }
          forest[x * stride + y] = best;
        }
      }
    }
  }
  return tree_dist[(n1 - 1) * n2 + (n2 - 1)];
}

template <LabeledTree T>
EditDistance tree_edit_distance(const T& a, const T& b) {
  return tree_edit_distance(OrderedLabeledTree(a), OrderedLabeledTree(b));
}

template <LabeledTree T>
std::size_t tree_size(const T& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += tree_size(c);
  return n;
}

inline constexpr std::size_t kBruteForceCap = 8;

namespace detail {

// Exhaustive forest edit distance on the rightmost-root decomposition:
//   d(F, G) = min( d(F - v, G) + 1,
//                  d(F, G - w) + 1,
//                  d(F - T(v), G - T(w)) + d(kids(v), kids(w)) + [label(v) != label(w)] )
// where v, w are the rightmost roots. Only a plain lookup table keyed by the
// two forests is kept; there is no keyroot or leftmost-leaf machinery.
template <typename T>
class ForestOracle {
 public:
  using Forest = std::vector<const T*>;

  EditDistance distance(const Forest& f, const Forest& g) {
    if (f.empty() && g.empty()) return 0;
    if (f.empty()) return forest_size(g);
    if (g.empty()) return forest_size(f);
    auto key = std::make_pair(f, g);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const T* v = f.back();
    const T* w = g.back();
    const Forest f_minus_v = without_root(f);
    const Forest g_minus_w = without_root(g);
    const Forest f_minus_tree(f.begin(), f.end() - 1);
    const Forest g_minus_tree(g.begin(), g.end() - 1);

    EditDistance best = distance(f_minus_v, g) + 1;
    best = std::min(best, distance(f, g_minus_w) + 1);
    const EditDistance relabel = std::string_view(v->label) == std::string_view(w->label) ? 0 : 1;
    best = std::min(best, distance(f_minus_tree, g_minus_tree) + distance(kids(v), kids(w)) + relabel);
    memo_.emplace(std::move(key), best);
    return best;
  }

 private:
  static Forest kids(const T* node) {
    Forest out;
    for (const auto& c : node->children) out.push_back(&c);
    return out;
  }
  static Forest without_root(const Forest& f) {
    Forest out(f.begin(), f.end() - 1);
    for (const auto& c : f.back()->children) out.push_back(&c);
    return out;
  }
  static EditDistance forest_size(const Forest& f) {
    EditDistance n = 0;
    for (const T* t : f) n += tree_size(*t);
    return n;
  }

  std::map<std::pair<Forest, Forest>, EditDistance> memo_;
};

}  // namespace detail

/// Exhaustive reference for `tree_edit_distance`, limited to trees of at most
/// `kBruteForceCap` nodes. Throws SizeLimit above the cap.
template <LabeledTree T>
EditDistance ted_bruteforce(const T& a, const T& b) {
  const std::size_t sa = tree_size(a);
  const std::size_t sb = tree_size(b);
  if (sa > kBruteForceCap) throw SizeLimit(sa, kBruteForceCap);
  if (sb > kBruteForceCap) throw SizeLimit(sb, kBruteForceCap);
  detail::ForestOracle<T> oracle;
  return oracle.distance({&a}, {&b});
}

/// Similarity from a distance and the pool maximum: 1 - d / d_max.
/// A degenerate pool (d_max == 0) maps to 1.
inline double normalize_distance(EditDistance d, EditDistance d_max) {
  if (d_max == 0) return 1.0;
  return 1.0 - static_cast<double>(d) / static_cast<double>(d_max);
}

inline std::vector<double> normalize_distances(std::span<const EditDistance> distances) {
  const EditDistance d_max =
      distances.empty() ? 0 : *std::max_element(distances.begin(), distances.end());
  std::vector<double> out;
  out.reserve(distances.size());
  for (const EditDistance d : distances) out.push_back(normalize_distance(d, d_max));
  return out;
}

/// Symmetric all-pairs distance matrix over a pool of trees.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  EditDistance at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, EditDistance d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }

  /// Maximum over distinct pairs (the diagonal is zero).
  EditDistance max() const {
    return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end());
  }

  /// Row-major n*n similarities, normalized by `d_max` (defaults to max()).
  std::vector<double> normalized(EditDistance d_max) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const EditDistance d : values_) out.push_back(normalize_distance(d, d_max));
    return out;
  }
  std::vector<double> normalized() const { return normalized(max()); }

 private:
  std::size_t n_ = 0;
  std::vector<EditDistance> values_;
};

/// Distances for all n(n-1)/2 pairs, spread over `jobs` workers. Every worker
/// writes only its own (i, j) slots, so the result does not depend on `jobs`.
inline DistanceMatrix pairwise_distances(std::span<const OrderedLabeledTree> trees, unsigned jobs = 1) {
  const std::size_t n = trees.size();
  DistanceMatrix m(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, tree_edit_distance(trees[i], trees[j]));
  });
  return m;
}

}  // namespace sqlsim
