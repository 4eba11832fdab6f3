#ifndef CONTROVERSY_DATASET_HPP
#define CONTROVERSY_DATASET_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "controversy/baseline_features.hpp"
#include "controversy/csv.hpp"
#include "controversy/errors.hpp"
#include "controversy/feature_vector.hpp"
#include "controversy/motifs.hpp"
#include "controversy/parallel.hpp"
#include "controversy/thread_model.hpp"

namespace controversy {

// threads.jsonl: one JSON object per line,
//   {"thread_id": str, "label": "controversial"|"non-controversial"|null,
//    "posts": [{"id": str, "author": str, "parent": str|null, "ts": int}]}
// follows.tsv: "follower<TAB>followee" lines, '#' starts a comment line.

namespace detail {

inline ReplyTree parse_thread_line(const std::string& line, std::size_t line_no,
                                   Strictness strictness, std::vector<std::string>* warnings) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("thread_id") || !j["thread_id"].is_string())
    fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": missing string thread_id");
  std::string thread_id = j["thread_id"].get<std::string>();

  std::optional<ThreadLabel> label;
  if (j.contains("label") && !j["label"].is_null()) {
    if (!j["label"].is_string())
      fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": label must be a string or null");
    label = parse_thread_label(j["label"].get<std::string>());
    if (!label)
      fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": label must be 'controversial' or 'non-controversial'");
  }

  if (!j.contains("posts") || !j["posts"].is_array())
    fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": missing posts array");
  std::vector<Post> posts;
  posts.reserve(j["posts"].size());
  for (const auto& jp : j["posts"]) {
    if (!jp.is_object() || !jp.contains("id") || !jp["id"].is_string() || !jp.contains("author") ||
        !jp["author"].is_string() || !jp.contains("ts") || !jp["ts"].is_number_integer())
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line_no) + ": post needs string id/author and integer ts");
    Post p;
    p.id = jp["id"].get<std::string>();
    p.author = jp["author"].get<std::string>();
    p.ts = jp["ts"].get<std::int64_t>();
    if (jp.contains("parent") && !jp["parent"].is_null()) {
      if (!jp["parent"].is_string())
        fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": parent must be a string or null");
      p.parent = jp["parent"].get<std::string>();
    }
    posts.push_back(std::move(p));
  }

  try {
    return build_reply_tree(std::move(posts), thread_id, label, strictness, warnings);
  } catch (const Error& e) {
    fail(ErrorCode::validation_error, "thread '" + thread_id + "': " + e.what());
  }
}

}  // namespace detail

inline std::vector<ReplyTree> load_threads_jsonl(const std::string& path, Strictness strictness,
                                                 std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open threads file '" + path + "'");
  std::vector<ReplyTree> trees;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      trees.push_back(detail::parse_thread_line(line, line_no, strictness, warnings));
    } catch (const Error& e) {
      if (strictness == Strictness::strict) throw;
      if (warnings)
        warnings->push_back("warning: " + path + ":" + std::to_string(line_no) +
                            " skipped (" + e.what() + ")");
    }
  }
  return trees;
}

inline FollowGraph load_follows_tsv(const std::string& path, Strictness strictness,
                                    std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open follows file '" + path + "'");
  FollowGraph fg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    bool malformed = tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
                     line.find('\t', tab + 1) != std::string::npos;
    if (malformed) {
      std::string msg = path + ":" + std::to_string(line_no) + ": expected 'follower<TAB>followee'";
      if (strictness == Strictness::strict) fail(ErrorCode::parse_error, msg);
      if (warnings) warnings->push_back("warning: skipped malformed line " + msg);
      continue;
    }
    std::string follower = line.substr(0, tab);
    std::string followee = line.substr(tab + 1);
    if (!fg.add_edge(follower, followee) && warnings)
      warnings->push_back("warning: " + path + ":" + std::to_string(line_no) +
                          ": dropped self-loop '" + follower + "'");
  }
  return fg;
}

inline void save_threads_jsonl(const std::vector<ReplyTree>& trees, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  for (const ReplyTree& tree : trees) {
    nlohmann::ordered_json j;
    j["thread_id"] = tree.thread_id();
    if (tree.label())
      j["label"] = to_string(*tree.label());
    else
      j["label"] = nullptr;
    j["posts"] = nlohmann::ordered_json::array();
    for (const Post& p : tree.posts()) {
      nlohmann::ordered_json jp;
      jp["id"] = p.id;
      jp["author"] = p.author;
      if (p.parent)
        jp["parent"] = *p.parent;
      else
        jp["parent"] = nullptr;
      jp["ts"] = p.ts;
      j["posts"].push_back(std::move(jp));
    }
    out << j.dump() << "\n";
  }
  if (!out) fail(ErrorCode::io_error, "write failed on '" + path + "'");
}

inline void save_follows_tsv(const FollowGraph& fg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  for (const auto& [u, v] : fg.sorted_edges()) out << u << "\t" << v << "\n";
  if (!out) fail(ErrorCode::io_error, "write failed on '" + path + "'");
}

struct LoadResult {
  std::vector<ReplyTree> trees;
  FollowGraph follows;
  std::vector<std::string> warnings;
};

inline LoadResult load_dataset(const std::string& threads_path, const std::string& follows_path,
                               Strictness strictness = Strictness::lenient) {
  LoadResult result;
  result.trees = load_threads_jsonl(threads_path, strictness, &result.warnings);
  result.follows = load_follows_tsv(follows_path, strictness, &result.warnings);
  for (const ReplyTree& tree : result.trees)
    for (const Post& p : tree.posts()) result.follows.add_user(p.author);
  return result;
}

// Keeps threads with strictly more than k distinct users.
inline std::vector<ReplyTree> filter_threads(const std::vector<ReplyTree>& trees, std::size_t k) {
  std::vector<ReplyTree> kept;
  for (const ReplyTree& tree : trees)
    if (count_users(tree) > k) kept.push_back(tree);
  return kept;
}

struct DiagnosticsRow {
  std::string thread_id;
  std::optional<ThreadLabel> label;
  std::size_t n_users = 0;
  BaselineDiagnostics base;
  std::array<std::int64_t, kNumDyadClasses> dyad_counts{};
  std::int64_t n_dyad_pairs = 0;
  std::array<std::int64_t, kNumTriadGroups> triad_counts{};
  std::int64_t n_triads = 0;
  std::int64_t n_reply_triangles = 0;
  std::int64_t n_possible_triples = 0;
};

struct FeatureMatrix {
  std::vector<FeatureVector> X;
  std::vector<std::optional<ThreadLabel>> labels;
  std::vector<DiagnosticsRow> diagnostics;

  // rows with a label, as ±1 targets
  void labeled(std::vector<FeatureVector>* x, std::vector<int>* y,
               std::vector<std::size_t>* rows = nullptr) const {
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (!labels[i]) continue;
      x->push_back(X[i]);
      y->push_back(label_to_sign(*labels[i]));
      if (rows) rows->push_back(i);
    }
  }
};

// One row per thread, in input order.
inline FeatureMatrix build_feature_matrix(const std::vector<ReplyTree>& trees,
                                          const FollowGraph& fg, int jobs = 1) {
  FeatureMatrix m;
  m.X.resize(trees.size());
  m.labels.resize(trees.size());
  m.diagnostics.resize(trees.size());
  parallel_for(trees.size(), jobs, [&](std::size_t i) {
    const ReplyTree& tree = trees[i];
    ReplyGraph rg = project_reply_graph(tree);
    MotifCensus census = motif_census(rg, fg);
    MotifFeatures motifs;
    motifs.dyad_freq = census.dyads.freq;
    motifs.triad_freq = census.triads.freq;
    motifs.triangle_ratio = census.triangles.ratio;
    m.X[i] = assemble_feature_vector(structural_features(tree, rg), propagation_features(tree),
                                     temporal_features(tree), motifs);
    m.labels[i] = tree.label();

    DiagnosticsRow& d = m.diagnostics[i];
    d.thread_id = tree.thread_id();
    d.label = tree.label();
    d.n_users = rg.users().size();
    d.base = baseline_diagnostics(tree);
    d.dyad_counts = census.dyads.counts;
    d.n_dyad_pairs = census.dyads.total_pairs;
    d.triad_counts = census.triads.counts;
    d.n_triads = census.triads.total_triangles;
    d.n_reply_triangles = census.triangles.reply_triangles;
    d.n_possible_triples = census.triangles.possible_triples;
  });
  return m;
}

inline void write_features_csv(const FeatureMatrix& m, const std::string& path) {
  CsvWriter csv(path);
  std::vector<std::string> header(feature_slot_names().begin(), feature_slot_names().end());
  header.push_back("label");
  csv.row(header);
  for (std::size_t i = 0; i < m.X.size(); ++i) {
    std::vector<std::string> row;
    row.reserve(kNumFeatureSlots + 1);
    for (double v : m.X[i].values) row.push_back(format_double(v));
    row.push_back(m.labels[i] ? to_string(*m.labels[i]) : "");
    csv.row(row);
  }
}

inline void write_diagnostics_csv(const FeatureMatrix& m, const std::string& path) {
  CsvWriter csv(path);
  std::vector<std::string> header{"thread_id",
                                  "label",
                                  "n_users",
                                  "max_inter_reply_time",
                                  "min_inter_reply_time",
                                  "max_cascade_depth",
                                  "origin_degree",
                                  "max_subtree_size",
                                  "n_dyad_pairs"};
  for (int d = 0; d < kNumDyadClasses; ++d)
    header.push_back(std::string("dyad_count_") + static_cast<char>('A' + d));
  header.push_back("n_triads");
  for (const std::string& code : triad_group_codes()) {
    std::string name = "triad_count_" + code;
    for (char& c : name)
      if (c == '|') c = '_';
    header.push_back(name);
  }
  header.push_back("n_reply_triangles");
  header.push_back("n_possible_triples");
  csv.row(header);

  for (const DiagnosticsRow& d : m.diagnostics) {
    std::vector<std::string> row;
    row.push_back(d.thread_id);
    row.push_back(d.label ? to_string(*d.label) : "");
    row.push_back(format_int(static_cast<std::int64_t>(d.n_users)));
    row.push_back(format_double(d.base.max_inter_reply_time));
    row.push_back(format_double(d.base.min_inter_reply_time));
    row.push_back(format_int(static_cast<std::int64_t>(d.base.max_cascade_depth)));
    row.push_back(format_int(static_cast<std::int64_t>(d.base.origin_degree)));
    row.push_back(format_int(static_cast<std::int64_t>(d.base.max_subtree_size)));
    row.push_back(format_int(d.n_dyad_pairs));
    for (std::int64_t c : d.dyad_counts) row.push_back(format_int(c));
    row.push_back(format_int(d.n_triads));
    for (std::int64_t c : d.triad_counts) row.push_back(format_int(c));
    row.push_back(format_int(d.n_reply_triangles));
    row.push_back(format_int(d.n_possible_triples));
    csv.row(row);
  }
}

}  // namespace controversy

#endif  // CONTROVERSY_DATASET_HPP
