#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlsim/corpus.hpp"
#include "sqlsim/errors.hpp"
#include "sqlsim/parallel.hpp"

namespace sqlsim {

inline constexpr std::string_view kTiePolicy = "tau-b; top-k ties broken by ascending candidate id";

/// Kendall tau-b between two aligned score vectors.
///
/// Returns nullopt when the coefficient is undefined: fewer than two items,
/// or either vector constant.
inline std::optional<double> kendall_tau(std::span<const double> reference, std::span<const double> predicted) {
  if (reference.size() != predicted.size()) throw LengthMismatch(reference.size(), predicted.size());
  const std::size_t n = reference.size();
  if (n < 2) return std::nullopt;
  long long concordant = 0;
  long long discordant = 0;
  long long tied_ref = 0;
  long long tied_pred = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int r = (reference[i] > reference[j]) - (reference[i] < reference[j]);
      const int p = (predicted[i] > predicted[j]) - (predicted[i] < predicted[j]);
      if (r == 0) ++tied_ref;
      if (p == 0) ++tied_pred;
      if (r == 0 || p == 0) continue;
      (r == p ? concordant : discordant)++;
    }
  }
  const long long pairs = static_cast<long long>(n * (n - 1) / 2);
  const long long untied_ref = pairs - tied_ref;
  const long long untied_pred = pairs - tied_pred;
  if (untied_ref == 0 || untied_pred == 0) return std::nullopt;
  const double tau = static_cast<double>(concordant - discordant) /
                     std::sqrt(static_cast<double>(untied_ref) * static_cast<double>(untied_pred));
  return std::clamp(tau, -1.0, 1.0);
}

/// Indices of the k highest scores; equal scores rank by ascending id.
inline std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::span<const long long> ids,
                                              std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  order.resize(std::min(k, order.size()));
  return order;
}

/// |top_k(predicted) ∩ top_k(reference)| / k.
inline double precision_at_k(std::span<const double> reference, std::span<const double> predicted,
                             std::span<const long long> ids, std::size_t k) {
  if (reference.size() != predicted.size()) throw LengthMismatch(reference.size(), predicted.size());
  if (ids.size() != reference.size()) throw LengthMismatch(reference.size(), ids.size());
  if (k == 0) throw Error("precision@k needs k >= 1");
  if (k > reference.size()) throw KTooLarge(k, reference.size());
  auto ref_top = top_k_indices(reference, ids, k);
  auto pred_top = top_k_indices(predicted, ids, k);
  std::sort(ref_top.begin(), ref_top.end());
  std::sort(pred_top.begin(), pred_top.end());
  std::vector<std::size_t> common;
  std::set_intersection(ref_top.begin(), ref_top.end(), pred_top.begin(), pred_top.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

/// Same, with candidate ids taken to be positions.
inline double precision_at_k(std::span<const double> reference, std::span<const double> predicted, std::size_t k) {
  std::vector<long long> ids(reference.size());
  std::iota(ids.begin(), ids.end(), 0LL);
  return precision_at_k(reference, predicted, ids, k);
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

using PairId = std::pair<long long, long long>;  // (anchor_id, candidate_id)

inline std::string pair_id_string(const PairId& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

/// Predicted scores keyed by (anchor_id, candidate_id).
class PredictionSet {
 public:
  void insert(long long anchor, long long candidate, double score) {
    if (!std::isfinite(score)) throw FormatError("non-finite score for " + pair_id_string({anchor, candidate}));
    if (!scores_.emplace(PairId{anchor, candidate}, score).second)
      throw FormatError("duplicate prediction for " + pair_id_string({anchor, candidate}));
  }

  std::optional<double> find(long long anchor, long long candidate) const {
    auto it = scores_.find({anchor, candidate});
    if (it == scores_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return scores_.size(); }
  const std::map<PairId, double>& scores() const noexcept { return scores_; }

  /// Maps every score through the logistic function.
  PredictionSet with_sigmoid() const {
    PredictionSet out;
    for (const auto& [key, z] : scores_) out.scores_.emplace(key, sigmoid(z));
    return out;
  }

 private:
  std::map<PairId, double> scores_;
};

/// Reads {"anchor_id", "candidate_id", "score"} lines. With `logits`, scores
/// are raw model outputs and pass through the sigmoid; otherwise they must
/// already lie in [0, 1].
inline PredictionSet load_predictions(const std::filesystem::path& path, bool logits = false) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  PredictionSet raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const auto obj = nlohmann::json::parse(line);
      const double score = obj.at("score").get<double>();
      if (!logits && !(score >= 0.0 && score <= 1.0))
        throw FormatError("score " + std::to_string(score) + " outside [0,1]; pass logits to apply the sigmoid");
      raw.insert(obj.at("anchor_id").get<long long>(), obj.at("candidate_id").get<long long>(), score);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return logits ? raw.with_sigmoid() : raw;
}

enum class Baseline { Question, Skeleton, Link };

/// Single-component scores taken from the oracle records themselves.
inline PredictionSet baseline_predictions(std::span<const PairRecord> records, Baseline which) {
  PredictionSet out;
  for (const auto& r : records) {
    const double s = which == Baseline::Question   ? r.components.question_sim
                     : which == Baseline::Skeleton ? r.components.skeleton_sim
                                                   : r.components.link_sim;
    out.insert(r.anchor_id, r.candidate_id, s);
  }
  return out;
}

namespace detail {

inline std::map<PairId, double> reference_labels(std::span<const PairRecord> records) {
  std::map<PairId, double> out;
  for (const auto& r : records)
    if (!out.emplace(PairId{r.anchor_id, r.candidate_id}, r.label).second)
      throw FormatError("oracle corpus repeats pair " + pair_id_string({r.anchor_id, r.candidate_id}));
  return out;
}

/// Every prediction must have a label, and every label a prediction.
inline void check_coverage(const PredictionSet& predictions, const std::map<PairId, double>& labels) {
  std::vector<std::string> unlabeled;
  for (const auto& [key, s] : predictions.scores())
    if (!labels.count(key)) unlabeled.push_back(pair_id_string(key));
  if (!unlabeled.empty()) throw MissingReference("oracle labels for predicted pairs", std::move(unlabeled));
  std::vector<std::string> unpredicted;
  for (const auto& [key, y] : labels)
    if (!predictions.find(key.first, key.second)) unpredicted.push_back(pair_id_string(key));
  if (!unpredicted.empty()) throw MissingReference("predictions for oracle pairs", std::move(unpredicted));
}

}  // namespace detail

/// (1/N) Σ |y_i - ŷ_i| over the predicted pairs.
inline double mean_absolute_error(const PredictionSet& predictions, const std::map<PairId, double>& labels) {
  if (predictions.size() == 0) throw Error("no predictions to score");
  std::vector<std::string> missing;
  double total = 0.0;
  for (const auto& [key, s] : predictions.scores()) {
    auto it = labels.find(key);
    if (it == labels.end()) {
      missing.push_back(pair_id_string(key));
      continue;
    }
    total += std::abs(it->second - s);
  }
  if (!missing.empty()) throw MissingReference("oracle labels for predicted pairs", std::move(missing));
  return total / static_cast<double>(predictions.size());
}

inline double mean_absolute_error(const PredictionSet& predictions, std::span<const PairRecord> records) {
  return mean_absolute_error(predictions, detail::reference_labels(records));
}

inline const std::vector<std::size_t> kDefaultKs = {1, 5, 10, 15, 20};

enum class TauStatus { Ok, TooFew, ConstantReference, ConstantPrediction };

inline std::string_view tau_status_name(TauStatus s) {
  switch (s) {
    case TauStatus::Ok: return "ok";
    case TauStatus::TooFew: return "too-few-candidates";
    case TauStatus::ConstantReference: return "constant-reference";
    case TauStatus::ConstantPrediction: return "constant-prediction";
  }
  return "?";
}

struct AnchorResult {
  long long anchor_id = 0;
  std::string db_id;
  std::size_t n_candidates = 0;
  std::optional<double> kendall_tau;
  TauStatus tau_status = TauStatus::Ok;
  std::map<std::size_t, double> precision;  // only feasible ks
  bool short_list = false;                  // fewer candidates than max(ks)
};

struct RankingReport {
  std::vector<std::size_t> ks;
  std::vector<AnchorResult> anchors;
  std::size_t n_anchors = 0;
  std::size_t n_tau = 0;
  std::optional<double> mean_kendall_tau;
  std::map<std::size_t, std::optional<double>> mean_precision;
  std::map<std::size_t, std::size_t> n_precision;
  std::size_t excluded_constant_reference = 0;
  std::size_t excluded_constant_prediction = 0;
  std::size_t excluded_too_few = 0;
  std::size_t short_anchors = 0;
  double mae = 0.0;
  std::string tie_policy{kTiePolicy};
};

/// Per-anchor tau and precision@k of `predictions` against the oracle labels,
/// plus their means over evaluable anchors and the MAE over all pairs.
inline RankingReport evaluate(const PredictionSet& predictions, std::span<const PairRecord> oracle,
                              std::vector<std::size_t> ks = kDefaultKs, unsigned jobs = 1) {
  if (oracle.empty()) throw Error("oracle corpus is empty");
  if (ks.empty()) throw Error("no k values given");
  for (auto k : ks)
    if (k == 0) throw Error("precision@k needs k >= 1");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  const auto labels = detail::reference_labels(oracle);
  detail::check_coverage(predictions, labels);

  struct Group {
    std::string db_id;
    std::vector<long long> ids;
    std::vector<double> ref;
    std::vector<double> pred;
  };
  std::map<long long, Group> groups;
  for (const auto& [key, y] : labels) {
    Group& g = groups[key.first];
    g.ids.push_back(key.second);
    g.ref.push_back(y);
    g.pred.push_back(*predictions.find(key.first, key.second));
  }
  for (const auto& r : oracle) groups[r.anchor_id].db_id = r.db_id;

  std::vector<const std::pair<const long long, Group>*> order;
  for (const auto& entry : groups) order.push_back(&entry);
  std::vector<AnchorResult> results(order.size());
  parallel_for(order.size(), jobs, [&](std::size_t i) {
    const auto& [anchor, g] = *order[i];
    AnchorResult& res = results[i];
    res.anchor_id = anchor;
    res.db_id = g.db_id;
    res.n_candidates = g.ids.size();
    res.kendall_tau = kendall_tau(g.ref, g.pred);
    if (!res.kendall_tau) {
      auto constant = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
      };
      res.tau_status = g.ids.size() < 2          ? TauStatus::TooFew
                       : constant(g.ref)          ? TauStatus::ConstantReference
                                                  : TauStatus::ConstantPrediction;
    }
    for (auto k : ks)
      if (k <= g.ids.size()) res.precision[k] = precision_at_k(g.ref, g.pred, g.ids, k);
    res.short_list = g.ids.size() < ks.back();
  });

  RankingReport report;
  report.ks = ks;
  report.n_anchors = results.size();
  double tau_sum = 0.0;
  std::map<std::size_t, double> p_sum;
  for (const auto& res : results) {
    switch (res.tau_status) {
      case TauStatus::Ok:
        tau_sum += *res.kendall_tau;
        ++report.n_tau;
        break;
      case TauStatus::ConstantReference: ++report.excluded_constant_reference; break;
      case TauStatus::ConstantPrediction: ++report.excluded_constant_prediction; break;
      case TauStatus::TooFew: ++report.excluded_too_few; break;
    }
    for (const auto& [k, p] : res.precision) {
      p_sum[k] += p;
      ++report.n_precision[k];
    }
    if (res.short_list) ++report.short_anchors;
  }
  if (report.n_tau > 0) report.mean_kendall_tau = tau_sum / static_cast<double>(report.n_tau);
  for (auto k : ks) {
    const std::size_t n = report.n_precision[k];
    report.mean_precision[k] = n ? std::optional<double>(p_sum[k] / static_cast<double>(n)) : std::nullopt;
  }
  report.mae = mean_absolute_error(predictions, labels);
  report.anchors = std::move(results);
  return report;
}

inline nlohmann::json to_json(const RankingReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["tie_policy"] = r.tie_policy;
  j["ks"] = r.ks;
  j["n_anchors"] = r.n_anchors;
  j["n_tau_anchors"] = r.n_tau;
  j["mean_kendall_tau"] = opt(r.mean_kendall_tau);
  nlohmann::json mp = nlohmann::json::object();
  nlohmann::json np = nlohmann::json::object();
  for (auto k : r.ks) {
    mp["p@" + std::to_string(k)] = opt(r.mean_precision.at(k));
    np["p@" + std::to_string(k)] = r.n_precision.count(k) ? r.n_precision.at(k) : 0;
  }
  j["mean_precision"] = mp;
  j["n_precision_anchors"] = np;
  j["excluded"] = {{"constant_reference", r.excluded_constant_reference},
                   {"constant_prediction", r.excluded_constant_prediction},
                   {"too_few_candidates", r.excluded_too_few}};
  j["short_list_anchors"] = r.short_anchors;
  j["mae"] = r.mae;
  nlohmann::json anchors = nlohmann::json::array();
  for (const auto& a : r.anchors) {
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : a.precision) p["p@" + std::to_string(k)] = v;
    anchors.push_back({{"anchor_id", a.anchor_id},
                       {"db_id", a.db_id},
                       {"n_candidates", a.n_candidates},
                       {"kendall_tau", opt(a.kendall_tau)},
                       {"tau_status", std::string(tau_status_name(a.tau_status))},
                       {"precision", p},
                       {"short_list", a.short_list}});
  }
  j["anchors"] = anchors;
  return j;
}

}  // namespace sqlsim
