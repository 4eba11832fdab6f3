#ifndef CONTROVERSY_EXPERIMENT_HPP
#define CONTROVERSY_EXPERIMENT_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "controversy/adaboost.hpp"
#include "controversy/csv.hpp"
#include "controversy/dataset.hpp"
#include "controversy/errors.hpp"
#include "controversy/feature_vector.hpp"
#include "controversy/thread_model.hpp"

namespace controversy {

struct EvalProtocol {
  enum class Kind { cross_validation, holdout_split };
  Kind kind = Kind::cross_validation;
  int folds = 5;
  double holdout = 0.3;  // test fraction for holdout_split
  int rounds = 100;
  std::uint64_t seed = 42;
  bool group_by_source = false;  // keep each source page inside one fold
  int jobs = 1;
};

// Source page convention: the thread id prefix up to the first '/', or the
// whole id when there is no '/'.
inline std::string source_of(const std::string& thread_id) {
  auto slash = thread_id.find('/');
  return slash == std::string::npos ? thread_id : thread_id.substr(0, slash);
}

struct AblationCell {
  MaskName mask = MaskName::baseline;
  std::size_t k = 0;
  bool present = false;
  std::string note;  // reason when absent
  std::size_t n_threads = 0, n_controversial = 0, n_non_controversial = 0;
  MetricsStats stats;
  Metrics pooled;
};

namespace detail {

inline Metrics holdout_evaluate(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                                const std::vector<int>& mask, const EvalProtocol& protocol) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < X.size(); ++i) (y[i] > 0 ? pos : neg).push_back(i);
  Rng rng(protocol.seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  auto split_point = [&](std::size_t n) {
    return static_cast<std::size_t>(static_cast<double>(n) * protocol.holdout);
  };
  std::size_t pos_test = split_point(pos.size()), neg_test = split_point(neg.size());
  if (pos_test == 0 || neg_test == 0 || pos_test == pos.size() || neg_test == neg.size())
    fail(ErrorCode::too_few_samples, "holdout split leaves a class empty");

  std::vector<char> in_test(X.size(), 0);
  for (std::size_t i = 0; i < pos_test; ++i) in_test[pos[i]] = 1;
  for (std::size_t i = 0; i < neg_test; ++i) in_test[neg[i]] = 1;

  std::vector<FeatureVector> train_x, test_x;
  std::vector<int> train_y, test_y;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (in_test[i]) {
      test_x.push_back(X[i]);
      test_y.push_back(y[i]);
    } else {
      train_x.push_back(X[i]);
      train_y.push_back(y[i]);
    }
  }
  BoostModel model =
      train(train_x, train_y, mask, protocol.rounds, protocol.seed, nullptr, protocol.jobs);
  return evaluate(model, test_x, test_y);
}

}  // namespace detail

// Metrics per (mask, user filter) cell. Features are computed once; each
// cell retrains on the threads passing its filter. Cells that cannot be
// evaluated are reported absent rather than failing the whole table.
inline std::vector<AblationCell> run_ablation(const std::vector<ReplyTree>& trees,
                                              const FollowGraph& fg,
                                              const std::vector<MaskName>& masks,
                                              const std::vector<std::size_t>& ks,
                                              const EvalProtocol& protocol) {
  FeatureMatrix matrix = build_feature_matrix(trees, fg, protocol.jobs);
  std::vector<std::size_t> users_per_thread(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) users_per_thread[i] = count_users(trees[i]);

  std::vector<AblationCell> cells;
  for (std::size_t k : ks) {
    std::vector<FeatureVector> X;
    std::vector<int> y;
    std::vector<std::string> groups;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (users_per_thread[i] <= k || !matrix.labels[i]) continue;
      X.push_back(matrix.X[i]);
      y.push_back(label_to_sign(*matrix.labels[i]));
      groups.push_back(source_of(trees[i].thread_id()));
      (y.back() > 0 ? n_pos : n_neg)++;
    }
    for (MaskName mask : masks) {
      AblationCell cell;
      cell.mask = mask;
      cell.k = k;
      cell.n_threads = X.size();
      cell.n_controversial = n_pos;
      cell.n_non_controversial = n_neg;
      try {
        if (protocol.kind == EvalProtocol::Kind::cross_validation) {
          CrossValResult cv =
              cross_validate(X, y, mask_slots(mask), protocol.folds, protocol.rounds,
                             protocol.seed, protocol.group_by_source ? &groups : nullptr,
                             protocol.jobs);
          cell.stats = cv.stats;
          cell.pooled = cv.pooled;
        } else {
          Metrics m = detail::holdout_evaluate(X, y, mask_slots(mask), protocol);
          cell.stats.accuracy_mean = m.accuracy;
          cell.stats.precision_mean = m.precision;
          cell.stats.recall_mean = m.recall;
          cell.stats.f_mean = m.f_measure;
          cell.pooled = m;
        }
        cell.present = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::too_few_samples && e.code() != ErrorCode::degenerate_labels)
          throw;
        cell.present = false;
        cell.note = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

// metrics.csv rows for the populated cells.
inline void write_metrics_csv(const std::vector<AblationCell>& cells, const std::string& path) {
  CsvWriter csv(path);
  csv.row({"mask", "k", "accuracy", "precision", "recall", "f_measure", "tp", "fp", "tn", "fn"});
  for (const AblationCell& cell : cells) {
    if (!cell.present) continue;
    csv.row({to_string(cell.mask), format_int(static_cast<std::int64_t>(cell.k)),
             format_double(cell.stats.accuracy_mean), format_double(cell.stats.precision_mean),
             format_double(cell.stats.recall_mean), format_double(cell.stats.f_mean),
             format_int(cell.pooled.tp), format_int(cell.pooled.fp), format_int(cell.pooled.tn),
             format_int(cell.pooled.fn)});
  }
}

// Aligned text table, one block per mask, one row per user filter.
inline std::string render_metrics_table(const std::vector<AblationCell>& cells) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %9s %10s %8s %10s\n", "Filtering", "Accuracy",
                "Precision", "Recall", "F-measure");
  out += line;

  // cells arrive k-major; render mask-major so each block lists the filters
  std::vector<MaskName> mask_order;
  for (const AblationCell& cell : cells)
    if (std::find(mask_order.begin(), mask_order.end(), cell.mask) == mask_order.end())
      mask_order.push_back(cell.mask);
  for (MaskName mask : mask_order) {
    out += "--- ";
    out += to_string(mask);
    out += " ---\n";
    for (const AblationCell& cell : cells) {
      if (cell.mask != mask) continue;
      std::string filter = ">" + std::to_string(cell.k) + " users";
      if (cell.present) {
        std::snprintf(line, sizeof(line), "%-12s %9.3f %10.3f %8.3f %10.3f\n", filter.c_str(),
                      cell.stats.accuracy_mean, cell.stats.precision_mean, cell.stats.recall_mean,
                      cell.stats.f_mean);
      } else {
        std::snprintf(line, sizeof(line), "%-12s %9s %10s %8s %10s  (%s)\n", filter.c_str(), "-",
                      "-", "-", "-", cell.note.c_str());
      }
      out += line;
    }
  }
  return out;
}

struct SubthreadPrediction {
  std::string thread_id;   // parent thread
  std::string subtree_id;  // "<thread_id>/<subtree root post id>"
  std::string subtree_root;
  std::size_t n_posts = 0;
  std::size_t n_users = 0;
  ThreadLabel predicted = ThreadLabel::non_controversial;
  double margin = 0.0;
};

struct SubthreadTreeSummary {
  std::string thread_id;
  std::size_t n_qualifying = 0;
  std::size_t n_controversial = 0;
  std::optional<double> fraction;  // absent when nothing qualifies
};

struct SubthreadReport {
  std::vector<SubthreadPrediction> rows;
  std::vector<SubthreadTreeSummary> per_tree;
  std::size_t n_qualifying = 0;
  std::size_t n_controversial = 0;
  std::optional<double> overall_fraction;
};

// Classifies every direct-reply subtree passing the user filter, exactly
// once each. Callers choose which trees to feed (typically those labeled or
// predicted non-controversial).
inline SubthreadReport analyze_subthreads(const BoostModel& model,
                                          const std::vector<ReplyTree>& trees,
                                          const FollowGraph& fg, std::size_t k, int jobs = 1) {
  if (!model.trained()) fail(ErrorCode::untrained_model, "analyze_subthreads needs a trained model");
  SubthreadReport report;

  std::vector<std::vector<SubthreadPrediction>> per_tree_rows(trees.size());
  parallel_for(trees.size(), jobs, [&](std::size_t i) {
    for (const ReplyTree& sub : direct_reply_subtrees(trees[i])) {
      std::size_t n_users = count_users(sub);
      if (n_users <= k) continue;
      auto [label, margin] = model.predict(extract_features(sub, fg));
      SubthreadPrediction row;
      row.thread_id = trees[i].thread_id();
      row.subtree_id = sub.thread_id();
      row.subtree_root = sub.root().id;
      row.n_posts = sub.size();
      row.n_users = n_users;
      row.predicted = label;
      row.margin = margin;
      per_tree_rows[i].push_back(std::move(row));
    }
  });

  for (std::size_t i = 0; i < trees.size(); ++i) {
    SubthreadTreeSummary summary;
    summary.thread_id = trees[i].thread_id();
    summary.n_qualifying = per_tree_rows[i].size();
    for (const SubthreadPrediction& row : per_tree_rows[i])
      if (row.predicted == ThreadLabel::controversial) ++summary.n_controversial;
    if (summary.n_qualifying > 0)
      summary.fraction =
          static_cast<double>(summary.n_controversial) / static_cast<double>(summary.n_qualifying);
    report.n_qualifying += summary.n_qualifying;
    report.n_controversial += summary.n_controversial;
    report.per_tree.push_back(std::move(summary));
    for (SubthreadPrediction& row : per_tree_rows[i]) report.rows.push_back(std::move(row));
  }
  if (report.n_qualifying > 0)
    report.overall_fraction =
        static_cast<double>(report.n_controversial) / static_cast<double>(report.n_qualifying);
  return report;
}

inline void write_subthread_predictions_csv(const SubthreadReport& report,
                                            const std::string& path) {
  CsvWriter csv(path);
  csv.row({"thread_id", "subtree_id", "subtree_root", "n_posts", "n_users", "prediction",
           "margin"});
  for (const SubthreadPrediction& row : report.rows)
    csv.row({row.thread_id, row.subtree_id, row.subtree_root,
             format_int(static_cast<std::int64_t>(row.n_posts)),
             format_int(static_cast<std::int64_t>(row.n_users)), to_string(row.predicted),
             format_double(row.margin)});
}

inline void write_subthread_summary_csv(const SubthreadReport& report, const std::string& path) {
  CsvWriter csv(path);
  csv.row({"thread_id", "n_qualifying", "n_controversial", "fraction"});
  for (const SubthreadTreeSummary& s : report.per_tree)
    csv.row({s.thread_id, format_int(static_cast<std::int64_t>(s.n_qualifying)),
             format_int(static_cast<std::int64_t>(s.n_controversial)),
             s.fraction ? format_double(*s.fraction) : ""});
}

}  // namespace controversy

#endif  // CONTROVERSY_EXPERIMENT_HPP
