#ifndef CONTROVERSY_PIPELINE_HPP
#define CONTROVERSY_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "controversy/adaboost.hpp"
#include "controversy/dataset.hpp"
#include "controversy/errors.hpp"
#include "controversy/experiment.hpp"
#include "controversy/synthetic.hpp"

namespace controversy {

// Shared command configuration; the CLI maps flags onto this 1:1.
struct Config {
  std::string threads_path;
  std::string follows_path;
  std::string model_path;
  std::string out_dir = ".";
  std::string params_path;
  std::size_t k = 2;
  std::string mask;  // empty means command default (full ablation for evaluate)
  int rounds = 100;
  int folds = 5;
  std::uint64_t seed = 42;
  bool seed_from_flag = false;  // synth: an explicit --seed overrides the params file
  bool strict = false;
  int jobs = 0;  // 0 = hardware concurrency
  std::string protocol = "cv";  // cv | split
  double holdout = 0.3;
  bool group_by_source = false;
};

namespace detail {

inline Strictness strictness_of(const Config& cfg) {
  return cfg.strict ? Strictness::strict : Strictness::lenient;
}

inline void ensure_out_dir(const Config& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create output directory '" + cfg.out_dir + "'");
}

inline std::string out_path(const Config& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline LoadResult load_inputs(const Config& cfg, std::ostream& log) {
  if (cfg.threads_path.empty() || cfg.follows_path.empty())
    fail(ErrorCode::invalid_params, "both --threads and --follows are required");
  LoadResult loaded = load_dataset(cfg.threads_path, cfg.follows_path, strictness_of(cfg));
  for (const std::string& w : loaded.warnings) log << w << "\n";
  if (loaded.trees.empty())
    fail(ErrorCode::validation_error, "no threads loaded from '" + cfg.threads_path + "'");
  return loaded;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write failed on '" + path + "'");
}

inline EvalProtocol protocol_of(const Config& cfg) {
  EvalProtocol protocol;
  if (cfg.protocol == "cv") {
    protocol.kind = EvalProtocol::Kind::cross_validation;
  } else if (cfg.protocol == "split") {
    protocol.kind = EvalProtocol::Kind::holdout_split;
  } else {
    fail(ErrorCode::invalid_params, "protocol must be 'cv' or 'split'");
  }
  protocol.folds = cfg.folds;
  protocol.holdout = cfg.holdout;
  protocol.rounds = cfg.rounds;
  protocol.seed = cfg.seed;
  protocol.group_by_source = cfg.group_by_source;
  protocol.jobs = resolve_jobs(cfg.jobs);
  return protocol;
}

}  // namespace detail

struct ExtractSummary {
  std::size_t loaded = 0;
  std::size_t kept = 0;
  std::array<std::pair<std::size_t, std::size_t>, 3> retention;  // (k, count) for k = 2, 3, 10
};

// extract: features.csv + diagnostics.csv for threads passing the k filter.
inline ExtractSummary run_extract(const Config& cfg, std::ostream& log) {
  log << "seed: " << cfg.seed << "\n";
  LoadResult loaded = detail::load_inputs(cfg, log);
  detail::ensure_out_dir(cfg);

  ExtractSummary summary;
  summary.loaded = loaded.trees.size();
  const std::size_t ks[3] = {2, 3, 10};
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t count = 0;
    for (const ReplyTree& tree : loaded.trees)
      if (count_users(tree) > ks[i]) ++count;
    summary.retention[i] = {ks[i], count};
  }

  std::vector<ReplyTree> kept = filter_threads(loaded.trees, cfg.k);
  summary.kept = kept.size();
  FeatureMatrix matrix = build_feature_matrix(kept, loaded.follows, resolve_jobs(cfg.jobs));
  write_features_csv(matrix, detail::out_path(cfg, "features.csv"));
  write_diagnostics_csv(matrix, detail::out_path(cfg, "diagnostics.csv"));

  log << "threads loaded: " << summary.loaded << "\n";
  std::size_t base = summary.retention[0].second;
  for (const auto& [k, count] : summary.retention) {
    char line[96];
    double pct = base == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(base);
    std::snprintf(line, sizeof(line), ">%zu users: %zu (%.0f%%)", k, count, pct);
    log << line << "\n";
  }
  log << "wrote features for " << summary.kept << " threads (k=" << cfg.k << ") to "
      << cfg.out_dir << "\n";
  return summary;
}

struct TrainSummary {
  std::size_t n_threads = 0;
  double train_accuracy = 0.0;
  TrainReport report;
};

// train: model.json + training_report.txt on the labeled threads passing k.
inline TrainSummary run_train(const Config& cfg, std::ostream& log) {
  log << "seed: " << cfg.seed << "\n";
  LoadResult loaded = detail::load_inputs(cfg, log);
  detail::ensure_out_dir(cfg);

  std::vector<ReplyTree> kept = filter_threads(loaded.trees, cfg.k);
  FeatureMatrix matrix = build_feature_matrix(kept, loaded.follows, resolve_jobs(cfg.jobs));
  std::vector<FeatureVector> X;
  std::vector<int> y;
  matrix.labeled(&X, &y);

  MaskName mask = cfg.mask.empty() ? MaskName::baseline_dyadic_triadic : parse_mask(cfg.mask);
  TrainSummary summary;
  BoostModel model = train(X, y, mask_slots(mask), cfg.rounds, cfg.seed, &summary.report,
                           resolve_jobs(cfg.jobs));
  summary.n_threads = X.size();
  summary.train_accuracy = 1.0 - summary.report.final_train_error;

  detail::write_text_file(detail::out_path(cfg, "model.json"), model.to_json());

  std::ostringstream report;
  report << "mask: " << to_string(mask) << "\n";
  report << "threads: " << X.size() << "\n";
  report << "rounds_requested: " << cfg.rounds << "\n";
  report << "rounds_used: " << summary.report.rounds.size() << "\n";
  report << "round,slot,slot_name,threshold,polarity,weighted_error,alpha,train_error\n";
  for (const RoundRecord& r : summary.report.rounds) {
    report << r.round << "," << r.slot << ","
           << feature_slot_names()[static_cast<std::size_t>(r.slot)] << ","
           << format_double(r.threshold) << "," << r.polarity << ","
           << format_double(r.weighted_error) << "," << format_double(r.alpha) << ","
           << format_double(r.train_error) << "\n";
  }
  report << "error_bound: " << format_double(summary.report.error_bound) << "\n";
  report << "final_train_error: " << format_double(summary.report.final_train_error) << "\n";
  report << "importance:\n";
  std::size_t rank = 1;
  for (const auto& [name, score] : feature_importance(model))
    report << "  " << rank++ << ". " << name << " " << format_double(score) << "\n";
  detail::write_text_file(detail::out_path(cfg, "training_report.txt"), report.str());

  log << "trained on " << X.size() << " threads (k=" << cfg.k << ", mask=" << to_string(mask)
      << "), training accuracy " << format_double(summary.train_accuracy) << "\n";
  log << "wrote model.json and training_report.txt to " << cfg.out_dir << "\n";
  return summary;
}

// evaluate: metrics.csv + metrics_table.txt. With --mask set, a single
// (mask, k) cell; otherwise the full grid of the four masks x k in {2,3,10}.
inline std::vector<AblationCell> run_evaluate(const Config& cfg, std::ostream& log) {
  log << "seed: " << cfg.seed << "\n";
  LoadResult loaded = detail::load_inputs(cfg, log);
  detail::ensure_out_dir(cfg);

  std::vector<MaskName> masks;
  std::vector<std::size_t> ks;
  if (cfg.mask.empty()) {
    masks = {MaskName::baseline, MaskName::baseline_dyadic, MaskName::baseline_dyadic_triadic,
             MaskName::dyadic_only};
    ks = {2, 3, 10};
  } else {
    masks = {parse_mask(cfg.mask)};
    ks = {cfg.k};
  }

  std::vector<AblationCell> cells =
      run_ablation(loaded.trees, loaded.follows, masks, ks, detail::protocol_of(cfg));
  write_metrics_csv(cells, detail::out_path(cfg, "metrics.csv"));
  std::string table = render_metrics_table(cells);
  detail::write_text_file(detail::out_path(cfg, "metrics_table.txt"), table);
  log << table;
  log << "wrote metrics.csv and metrics_table.txt to " << cfg.out_dir << "\n";
  return cells;
}

// subthreads: per-subtree predictions for trees that are labeled
// non-controversial (or predicted so when unlabeled).
inline SubthreadReport run_subthreads(const Config& cfg, std::ostream& log) {
  log << "seed: " << cfg.seed << "\n";
  if (cfg.model_path.empty()) fail(ErrorCode::invalid_params, "--model is required");
  std::ifstream in(cfg.model_path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open model file '" + cfg.model_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  BoostModel model = BoostModel::from_json(buffer.str());

  LoadResult loaded = detail::load_inputs(cfg, log);
  detail::ensure_out_dir(cfg);

  std::vector<ReplyTree> selected;
  for (ReplyTree& tree : loaded.trees) {
    if (tree.label()) {
      if (*tree.label() == ThreadLabel::non_controversial) selected.push_back(std::move(tree));
      continue;
    }
    auto [label, margin] = model.predict(extract_features(tree, loaded.follows));
    (void)margin;
    if (label == ThreadLabel::non_controversial) selected.push_back(std::move(tree));
  }

  SubthreadReport report =
      analyze_subthreads(model, selected, loaded.follows, cfg.k, resolve_jobs(cfg.jobs));
  write_subthread_predictions_csv(report, detail::out_path(cfg, "subthread_predictions.csv"));
  write_subthread_summary_csv(report, detail::out_path(cfg, "subthread_summary.csv"));

  log << "non-controversial trees analyzed: " << selected.size() << "\n";
  log << "qualifying direct-reply subtrees (k=" << cfg.k << "): " << report.n_qualifying << "\n";
  if (report.overall_fraction)
    log << "controversial fraction: " << format_double(*report.overall_fraction) << " ("
        << report.n_controversial << "/" << report.n_qualifying << ")\n";
  else
    log << "controversial fraction: n/a (no qualifying subtrees)\n";
  log << "wrote subthread_predictions.csv and subthread_summary.csv to " << cfg.out_dir << "\n";
  return report;
}

// synth: threads.jsonl + follows.tsv from a params file (or defaults).
inline SynthResult run_synth(const Config& cfg, std::ostream& log) {
  SynthParams params = SynthParams::defaults();
  if (!cfg.params_path.empty()) {
    std::ifstream in(cfg.params_path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open params file '" + cfg.params_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    params = synth_params_from_json(buffer.str());
  }
  if (cfg.seed_from_flag) params.seed = cfg.seed;
  log << "seed: " << params.seed << "\n";

  SynthResult result = generate_synthetic(params);
  detail::ensure_out_dir(cfg);
  save_threads_jsonl(result.trees, detail::out_path(cfg, "threads.jsonl"));
  save_follows_tsv(result.follows, detail::out_path(cfg, "follows.tsv"));

  log << "generated " << params.controversial.n_threads << " controversial and "
      << params.non_controversial.n_threads << " non-controversial threads, "
      << result.follows.edge_count() << " follow edges\n";
  log << "wrote threads.jsonl and follows.tsv to " << cfg.out_dir << "\n";
  return result;
}

}  // namespace controversy

#endif  // CONTROVERSY_PIPELINE_HPP
