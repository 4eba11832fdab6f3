#ifndef CONTROVERSY_ADABOOST_HPP
#define CONTROVERSY_ADABOOST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "controversy/errors.hpp"
#include "controversy/feature_vector.hpp"
#include "controversy/parallel.hpp"
#include "controversy/rng.hpp"
#include "controversy/thread_model.hpp"

namespace controversy {

// One-feature threshold classifier: vote = polarity if x[slot] > threshold,
// -polarity otherwise.
struct DecisionStump {
  int slot = 0;
  double threshold = 0.0;
  int polarity = 1;
  double alpha = 0.0;

  int vote(const FeatureVector& x) const {
    return x.values[static_cast<std::size_t>(slot)] > threshold ? polarity : -polarity;
  }
};

struct RoundRecord {
  int round = 0;  // 1-based
  int slot = 0;
  double threshold = 0.0;
  int polarity = 1;
  double weighted_error = 0.0;  // clamped value used for alpha
  double alpha = 0.0;
  double train_error = 0.0;  // ensemble 0/1 error after this round
};

struct TrainReport {
  std::vector<RoundRecord> rounds;
  double final_train_error = 0.0;
  double error_bound = 1.0;  // prod over rounds of 2*sqrt(err*(1-err))
};

inline constexpr double kBoostErrEps = 1e-10;

class BoostModel {
 public:
  bool trained() const { return trained_; }
  const std::vector<DecisionStump>& stumps() const { return stumps_; }
  const std::vector<int>& mask() const { return mask_; }
  int n_rounds() const { return n_rounds_; }
  const std::array<double, kNumFeatureSlots>& importance() const { return importance_; }

  std::pair<ThreadLabel, double> predict(const FeatureVector& x) const {
    if (!trained_) fail(ErrorCode::untrained_model, "predict called on an untrained model");
    double margin = 0.0;
    for (const DecisionStump& s : stumps_) margin += s.alpha * s.vote(x);
    // ties resolve to non-controversial
    return {margin > 0.0 ? ThreadLabel::controversial : ThreadLabel::non_controversial, margin};
  }

  std::string to_json() const {
    if (!trained_) fail(ErrorCode::untrained_model, "cannot serialize an untrained model");
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["slot_names"] = feature_slot_names();
    j["mask"] = mask_;
    j["stumps"] = nlohmann::ordered_json::array();
    for (const DecisionStump& s : stumps_) {
      nlohmann::ordered_json js;
      js["slot"] = s.slot;
      js["threshold"] = s.threshold;
      js["polarity"] = s.polarity;
      js["alpha"] = s.alpha;
      j["stumps"].push_back(std::move(js));
    }
    j["importance"] = importance_;
    return j.dump(2) + "\n";
  }

  static BoostModel from_json(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::parse_error, std::string("model JSON: ") + e.what());
    }
    try {
      if (j.at("version").get<int>() != 1)
        fail(ErrorCode::parse_error, "unsupported model version");
      auto names = j.at("slot_names").get<std::vector<std::string>>();
      const auto& expected = feature_slot_names();
      if (names.size() != expected.size() || !std::equal(names.begin(), names.end(), expected.begin()))
        fail(ErrorCode::parse_error, "model slot table does not match this build");
      BoostModel m;
      m.mask_ = j.at("mask").get<std::vector<int>>();
      for (const auto& js : j.at("stumps")) {
        DecisionStump s;
        s.slot = js.at("slot").get<int>();
        s.threshold = js.at("threshold").get<double>();
        s.polarity = js.at("polarity").get<int>();
        s.alpha = js.at("alpha").get<double>();
        if (s.slot < 0 || s.slot >= kNumFeatureSlots || (s.polarity != 1 && s.polarity != -1))
          fail(ErrorCode::parse_error, "malformed stump entry");
        m.stumps_.push_back(s);
      }
      auto imp = j.at("importance").get<std::vector<double>>();
      if (imp.size() != static_cast<std::size_t>(kNumFeatureSlots))
        fail(ErrorCode::parse_error, "importance vector has wrong length");
      std::copy(imp.begin(), imp.end(), m.importance_.begin());
      m.n_rounds_ = static_cast<int>(m.stumps_.size());
      m.trained_ = true;
      return m;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::parse_error, std::string("model JSON: ") + e.what());
    }
  }

 private:
  friend BoostModel train(const std::vector<FeatureVector>&, const std::vector<int>&,
                          const std::vector<int>&, int, std::uint64_t, TrainReport*, int);

  std::vector<DecisionStump> stumps_;
  std::vector<int> mask_;
  int n_rounds_ = 0;
  std::array<double, kNumFeatureSlots> importance_{};
  bool trained_ = false;
};

namespace detail {

struct StumpCandidate {
  int slot = -1;
  double threshold = 0.0;
  int polarity = 1;
  double error = std::numeric_limits<double>::infinity();
};

// Best stump on one slot given the precomputed value-sorted sample order.
// Candidate thresholds are midpoints between consecutive distinct values;
// a constant slot yields no candidate. Sweep keeps weight totals on each
// side of the split, so a full scan costs O(n) per round.
inline StumpCandidate best_stump_for_slot(const std::vector<FeatureVector>& X,
                                          const std::vector<int>& y,
                                          const std::vector<double>& w,
                                          const std::vector<int>& order, int slot) {
  double total_pos = 0.0, total_neg = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] > 0 ? total_pos : total_neg) += w[i];

  StumpCandidate best;
  best.slot = slot;
  best.error = std::numeric_limits<double>::infinity();
  double left_pos = 0.0, left_neg = 0.0;
  bool found = false;
  for (std::size_t p = 0; p + 1 < order.size(); ++p) {
    std::size_t i = static_cast<std::size_t>(order[p]);
    (y[i] > 0 ? left_pos : left_neg) += w[i];
    double v = X[i].values[static_cast<std::size_t>(slot)];
    double nv = X[static_cast<std::size_t>(order[p + 1])].values[static_cast<std::size_t>(slot)];
    if (v == nv) continue;
    double thr = v + (nv - v) * 0.5;
    if (!(thr < nv)) thr = v;  // rounding guard: keep the split strictly below nv
    double err_plus = left_pos + (total_neg - left_neg);   // predicts +1 right of thr
    double err_minus = left_neg + (total_pos - left_pos);  // predicts -1 right of thr
    if (err_plus < best.error) {
      best.threshold = thr;
      best.polarity = 1;
      best.error = err_plus;
      found = true;
    }
    if (err_minus < best.error) {
      best.threshold = thr;
      best.polarity = -1;
      best.error = err_minus;
      found = true;
    }
  }
  if (!found) best.slot = -1;
  return best;
}

}  // namespace detail

// Discrete AdaBoost over decision stumps. Deterministic: stump search scans
// slots in mask order, thresholds ascending, polarity +1 before -1, and
// accepts strictly better error only; `seed` is part of the signature for
// interface stability but the procedure draws no randomness.
inline BoostModel train(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                        const std::vector<int>& mask, int rounds, std::uint64_t seed = 0,
                        TrainReport* report = nullptr, int jobs = 1) {
  (void)seed;
  if (X.size() != y.size())
    fail(ErrorCode::dimension_mismatch, "feature matrix and label vector sizes differ");
  if (mask.empty()) fail(ErrorCode::empty_mask, "feature mask is empty");
  for (int s : mask)
    if (s < 0 || s >= kNumFeatureSlots)
      fail(ErrorCode::invalid_params, "mask slot " + std::to_string(s) + " out of range");
  if (rounds < 1) fail(ErrorCode::invalid_params, "rounds must be >= 1");

  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else fail(ErrorCode::invalid_params, "labels must be +1 or -1");
  }
  if (!has_pos || !has_neg)
    fail(ErrorCode::degenerate_labels, "training data must contain both classes");

  const std::size_t n = X.size();

  // per-slot sample orders, computed once (weights change, order does not)
  std::vector<std::vector<int>> orders(mask.size());
  parallel_for(mask.size(), jobs, [&](std::size_t mi) {
    int slot = mask[mi];
    std::vector<int>& order = orders[mi];
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double va = X[static_cast<std::size_t>(a)].values[static_cast<std::size_t>(slot)];
      double vb = X[static_cast<std::size_t>(b)].values[static_cast<std::size_t>(slot)];
      if (va != vb) return va < vb;
      return a < b;
    });
  });

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> margins(n, 0.0);
  std::vector<int> votes(n, 0);
  BoostModel model;
  model.mask_ = mask;
  std::sort(model.mask_.begin(), model.mask_.end());
  model.n_rounds_ = rounds;
  double bound = 1.0;

  std::vector<detail::StumpCandidate> per_slot(mask.size());
  for (int t = 0; t < rounds; ++t) {
    parallel_for(mask.size(), jobs, [&](std::size_t mi) {
      per_slot[mi] = detail::best_stump_for_slot(X, y, w, orders[mi], mask[mi]);
    });
    detail::StumpCandidate best;
    for (const auto& cand : per_slot) {
      if (cand.slot < 0) continue;
      if (cand.error < best.error) best = cand;
    }
    if (best.slot < 0) break;                     // every masked slot is constant
    if (best.error >= 0.5 - kBoostErrEps) break;  // no better-than-chance stump left

    double err = std::clamp(best.error, kBoostErrEps, 1.0 - kBoostErrEps);
    double alpha = 0.5 * std::log((1.0 - err) / err);
    DecisionStump stump{best.slot, best.threshold, best.polarity, alpha};
    model.stumps_.push_back(stump);
    bound *= 2.0 * std::sqrt(err * (1.0 - err));

    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      votes[i] = stump.vote(X[i]);
      margins[i] += alpha * votes[i];
      int predicted = margins[i] > 0.0 ? 1 : -1;
      if (predicted != y[i]) ++mistakes;
    }
    double train_error = static_cast<double>(mistakes) / static_cast<double>(n);
    if (report)
      report->rounds.push_back(
          {t + 1, best.slot, best.threshold, best.polarity, err, alpha, train_error});

    if (best.error <= kBoostErrEps) break;  // perfect stump, nothing to reweight

    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(-alpha * static_cast<double>(y[i] * votes[i]));
      wsum += w[i];
    }
    for (std::size_t i = 0; i < n; ++i) w[i] /= wsum;
  }

  double total_alpha = 0.0;
  for (const DecisionStump& s : model.stumps_) total_alpha += std::abs(s.alpha);
  if (total_alpha > 0.0)
    for (const DecisionStump& s : model.stumps_)
      model.importance_[static_cast<std::size_t>(s.slot)] += std::abs(s.alpha) / total_alpha;

  if (report) {
    report->error_bound = bound;
    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((margins[i] > 0.0 ? 1 : -1) != y[i]) ++mistakes;
    report->final_train_error = static_cast<double>(mistakes) / static_cast<double>(n);
  }

  model.trained_ = true;
  return model;
}

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  bool precision_defined = true;  // false when reported as 0 for a 0 denominator
  bool recall_defined = true;
};

inline Metrics metrics_from_confusion(std::int64_t tp, std::int64_t fp, std::int64_t tn,
                                      std::int64_t fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  std::int64_t total = tp + fp + tn + fn;
  m.accuracy = total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
  if (tp + fp == 0) {
    m.precision = 0.0;
    m.precision_defined = false;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    m.recall = 0.0;
    m.recall_defined = false;
  } else {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  m.f_measure = (m.precision + m.recall) > 0.0
                    ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
  return m;
}

inline Metrics evaluate(const BoostModel& model, const std::vector<FeatureVector>& X,
                        const std::vector<int>& y) {
  if (X.size() != y.size())
    fail(ErrorCode::dimension_mismatch, "feature matrix and label vector sizes differ");
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    int predicted = label_to_sign(model.predict(X[i]).first);
    if (predicted > 0)
      (y[i] > 0 ? tp : fp)++;
    else
      (y[i] > 0 ? fn : tn)++;
  }
  return metrics_from_confusion(tp, fp, tn, fn);
}

// Ranked (slot name, score), descending, ties broken by slot index.
inline std::vector<std::pair<std::string, double>> feature_importance(const BoostModel& model) {
  if (!model.trained()) fail(ErrorCode::untrained_model, "feature_importance needs a trained model");
  std::vector<std::pair<std::string, double>> ranked;
  std::vector<int> slots = model.mask();
  std::sort(slots.begin(), slots.end());
  std::stable_sort(slots.begin(), slots.end(), [&](int a, int b) {
    return model.importance()[static_cast<std::size_t>(a)] > model.importance()[static_cast<std::size_t>(b)];
  });
  ranked.reserve(slots.size());
  for (int s : slots)
    ranked.emplace_back(feature_slot_names()[static_cast<std::size_t>(s)],
                        model.importance()[static_cast<std::size_t>(s)]);
  return ranked;
}

// Minimal plug-in surface so alternative learners can slot into the same
// evaluation harness.
class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;
  virtual void fit(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                   const std::vector<int>& mask, std::uint64_t seed) = 0;
  virtual std::pair<ThreadLabel, double> classify(const FeatureVector& x) const = 0;
};

class AdaBoostClassifier final : public BinaryClassifier {
 public:
  explicit AdaBoostClassifier(int rounds = 100, int jobs = 1) : rounds_(rounds), jobs_(jobs) {}

  void fit(const std::vector<FeatureVector>& X, const std::vector<int>& y,
           const std::vector<int>& mask, std::uint64_t seed) override {
    model_ = train(X, y, mask, rounds_, seed, nullptr, jobs_);
  }

  std::pair<ThreadLabel, double> classify(const FeatureVector& x) const override {
    return model_.predict(x);
  }

  const BoostModel& model() const { return model_; }

 private:
  int rounds_;
  int jobs_;
  BoostModel model_;
};

using ClassifierFactory = std::function<std::unique_ptr<BinaryClassifier>()>;

struct MetricsStats {
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double precision_mean = 0.0, precision_std = 0.0;
  double recall_mean = 0.0, recall_std = 0.0;
  double f_mean = 0.0, f_std = 0.0;
};

struct CrossValResult {
  std::vector<Metrics> fold_metrics;
  MetricsStats stats;
  Metrics pooled;  // confusion counts summed over folds
};

namespace detail {

inline MetricsStats summarize_folds(const std::vector<Metrics>& folds) {
  MetricsStats s;
  const double k = static_cast<double>(folds.size());
  if (folds.empty()) return s;
  auto accumulate = [&](auto get, double& mean, double& stddev) {
    double m = 0.0;
    for (const Metrics& f : folds) m += get(f);
    m /= k;
    double var = 0.0;
    for (const Metrics& f : folds) var += (get(f) - m) * (get(f) - m);
    var /= k;  // population variance over the folds
    mean = m;
    stddev = std::sqrt(var);
  };
  accumulate([](const Metrics& m) { return m.accuracy; }, s.accuracy_mean, s.accuracy_std);
  accumulate([](const Metrics& m) { return m.precision; }, s.precision_mean, s.precision_std);
  accumulate([](const Metrics& m) { return m.recall; }, s.recall_mean, s.recall_std);
  accumulate([](const Metrics& m) { return m.f_measure; }, s.f_mean, s.f_std);
  return s;
}

}  // namespace detail

// Stratified k-fold cross-validation, deterministic under `seed`. When
// `groups` is given (one id per sample), whole groups are assigned to folds
// so threads from one source page never straddle a fold boundary.
inline CrossValResult cross_validate(const std::vector<FeatureVector>& X,
                                     const std::vector<int>& y, const std::vector<int>& mask,
                                     int k_folds, int rounds, std::uint64_t seed,
                                     const std::vector<std::string>* groups = nullptr,
                                     int jobs = 1, const ClassifierFactory& factory = {}) {
  if (X.size() != y.size())
    fail(ErrorCode::dimension_mismatch, "feature matrix and label vector sizes differ");
  if (groups && groups->size() != X.size())
    fail(ErrorCode::dimension_mismatch, "group vector and sample count differ");
  if (k_folds < 2) fail(ErrorCode::invalid_params, "cross-validation needs at least 2 folds");

  const std::size_t n = X.size();
  std::vector<int> fold_of(n, -1);
  Rng rng(seed);

  if (!groups) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (y[i] > 0 ? pos : neg).push_back(i);
    if (pos.size() < static_cast<std::size_t>(k_folds) || neg.size() < static_cast<std::size_t>(k_folds))
      fail(ErrorCode::too_few_samples, "need at least k labeled threads per class for k folds");
    rng.shuffle(pos);
    rng.shuffle(neg);
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
  } else {
    std::vector<std::string> unique;
    std::unordered_map<std::string, int> group_fold;
    for (const auto& g : *groups)
      if (group_fold.emplace(g, -1).second) unique.push_back(g);
    if (unique.size() < static_cast<std::size_t>(k_folds))
      fail(ErrorCode::too_few_samples, "need at least k distinct groups for k folds");
    rng.shuffle(unique);
    for (std::size_t i = 0; i < unique.size(); ++i)
      group_fold[unique[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
    for (std::size_t i = 0; i < n; ++i) fold_of[i] = group_fold[(*groups)[i]];
  }

  CrossValResult result;
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (int f = 0; f < k_folds; ++f) {
    std::vector<FeatureVector> train_x, test_x;
    std::vector<int> train_y, test_y;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f) {
        test_x.push_back(X[i]);
        test_y.push_back(y[i]);
      } else {
        train_x.push_back(X[i]);
        train_y.push_back(y[i]);
      }
    }
    bool train_pos = std::any_of(train_y.begin(), train_y.end(), [](int v) { return v > 0; });
    bool train_neg = std::any_of(train_y.begin(), train_y.end(), [](int v) { return v < 0; });
    if (test_x.empty() || !train_pos || !train_neg)
      fail(ErrorCode::too_few_samples, "fold " + std::to_string(f) + " leaves a class empty");

    Metrics fold;
    if (factory) {
      auto clf = factory();
      clf->fit(train_x, train_y, mask, seed);
      std::int64_t ftp = 0, ffp = 0, ftn = 0, ffn = 0;
      for (std::size_t i = 0; i < test_x.size(); ++i) {
        int predicted = label_to_sign(clf->classify(test_x[i]).first);
        if (predicted > 0)
          (test_y[i] > 0 ? ftp : ffp)++;
        else
          (test_y[i] > 0 ? ffn : ftn)++;
      }
      fold = metrics_from_confusion(ftp, ffp, ftn, ffn);
    } else {
      BoostModel model = train(train_x, train_y, mask, rounds, seed, nullptr, jobs);
      fold = evaluate(model, test_x, test_y);
    }
    result.fold_metrics.push_back(fold);
    tp += fold.tp;
    fp += fold.fp;
    tn += fold.tn;
    fn += fold.fn;
  }
  result.stats = detail::summarize_folds(result.fold_metrics);
  result.pooled = metrics_from_confusion(tp, fp, tn, fn);
  return result;
}

}  // namespace controversy

#endif  // CONTROVERSY_ADABOOST_HPP
