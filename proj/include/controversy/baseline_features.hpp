#ifndef CONTROVERSY_BASELINE_FEATURES_HPP
#define CONTROVERSY_BASELINE_FEATURES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "controversy/thread_model.hpp"

namespace controversy {

struct StructuralFeatures {
  std::size_t tree_nodes = 0;
  std::size_t tree_edges = 0;
  std::size_t reply_nodes = 0;
  std::size_t reply_edges = 0;  // simple directed edges, multiplicities collapsed
  double tree_avg_degree = 0.0;
  double reply_avg_degree = 0.0;
};

struct PropagationFeatures {
  double avg_cascade_depth = 0.0;    // mean root-to-leaf hop distance
  double max_relative_degree = 0.0;  // max non-root tree degree / root degree
};

struct TemporalFeatures {
  double avg_inter_reply_time = 0.0;  // seconds, per-arc clamped at 0
  double frac_replies_first_hour = 0.0;
};

// Quantities dropped from the predictive vector but kept for export.
struct BaselineDiagnostics {
  double max_inter_reply_time = 0.0;  // raw deltas, may be negative on skewed data
  double min_inter_reply_time = 0.0;
  std::size_t max_cascade_depth = 0;
  std::size_t origin_degree = 0;  // root degree in the tree
  std::size_t max_subtree_size = 0;
};

namespace detail {

inline std::vector<std::size_t> node_depths(const ReplyTree& tree) {
  std::vector<std::size_t> depth(tree.size(), 0);
  std::vector<int> stack{tree.root_index()};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int c : tree.children(static_cast<std::size_t>(cur))) {
      depth[static_cast<std::size_t>(c)] = depth[static_cast<std::size_t>(cur)] + 1;
      stack.push_back(c);
    }
  }
  return depth;
}

inline std::size_t tree_degree(const ReplyTree& tree, std::size_t i) {
  return tree.children(i).size() + (tree.parent_index(i) >= 0 ? 1 : 0);
}

}  // namespace detail

// Requires rg to be the projection of tree. Average degree is total
// (in+out) degree; a tree edge contributes to both endpoints, so the
// tree average is 2E/N under the undirected reading.
inline StructuralFeatures structural_features(const ReplyTree& tree, const ReplyGraph& rg) {
  StructuralFeatures f;
  f.tree_nodes = tree.size();
  f.tree_edges = tree.size() - 1;
  f.reply_nodes = rg.users().size();
  f.reply_edges = rg.simple_edge_count();
  f.tree_avg_degree = f.tree_nodes == 0 ? 0.0 : 2.0 * static_cast<double>(f.tree_edges) / static_cast<double>(f.tree_nodes);
  f.reply_avg_degree = f.reply_nodes == 0 ? 0.0 : 2.0 * static_cast<double>(f.reply_edges) / static_cast<double>(f.reply_nodes);
  return f;
}

inline PropagationFeatures propagation_features(const ReplyTree& tree) {
  if (tree.size() < 2) return {};

  auto depth = detail::node_depths(tree);
  double depth_sum = 0.0;
  std::size_t n_leaves = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.children(i).empty()) {
      depth_sum += static_cast<double>(depth[i]);
      ++n_leaves;
    }
  }

  std::size_t root = static_cast<std::size_t>(tree.root_index());
  std::size_t root_degree = tree.children(root).size();
  std::size_t max_non_root = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (i == root) continue;
    max_non_root = std::max(max_non_root, detail::tree_degree(tree, i));
  }

  PropagationFeatures f;
  f.avg_cascade_depth = depth_sum / static_cast<double>(n_leaves);
  f.max_relative_degree = static_cast<double>(max_non_root) / static_cast<double>(root_degree);
  return f;
}

inline TemporalFeatures temporal_features(const ReplyTree& tree) {
  if (tree.size() < 2) return {};

  const std::int64_t root_ts = tree.root().ts;
  double delta_sum = 0.0;
  std::size_t within_hour = 0;
  std::size_t n_replies = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    int p = tree.parent_index(i);
    if (p < 0) continue;
    ++n_replies;
    std::int64_t delta = tree.posts()[i].ts - tree.posts()[static_cast<std::size_t>(p)].ts;
    delta_sum += static_cast<double>(std::max<std::int64_t>(delta, 0));
    if (tree.posts()[i].ts <= root_ts + 3600) ++within_hour;
  }

  TemporalFeatures f;
  f.avg_inter_reply_time = delta_sum / static_cast<double>(n_replies);
  f.frac_replies_first_hour = static_cast<double>(within_hour) / static_cast<double>(n_replies);
  return f;
}

inline BaselineDiagnostics baseline_diagnostics(const ReplyTree& tree) {
  BaselineDiagnostics d;
  if (tree.size() < 2) return d;

  auto depth = detail::node_depths(tree);
  d.max_cascade_depth = *std::max_element(depth.begin(), depth.end());

  std::size_t root = static_cast<std::size_t>(tree.root_index());
  d.origin_degree = tree.children(root).size();

  // subtree sizes rooted at each direct reply of the root
  std::vector<std::size_t> sz(tree.size(), 1);
  // posts are not stored in topological order; accumulate by repeated passes
  // over parents in decreasing depth order instead.
  std::vector<std::size_t> order(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&depth](std::size_t a, std::size_t b) { return depth[a] > depth[b]; });
  for (std::size_t i : order) {
    int p = tree.parent_index(i);
    if (p >= 0) sz[static_cast<std::size_t>(p)] += sz[i];
  }
  for (int c : tree.children(root)) d.max_subtree_size = std::max(d.max_subtree_size, sz[static_cast<std::size_t>(c)]);

  double max_delta = -std::numeric_limits<double>::infinity();
  double min_delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    int p = tree.parent_index(i);
    if (p < 0) continue;
    double delta = static_cast<double>(tree.posts()[i].ts - tree.posts()[static_cast<std::size_t>(p)].ts);
    max_delta = std::max(max_delta, delta);
    min_delta = std::min(min_delta, delta);
  }
  d.max_inter_reply_time = max_delta;
  d.min_inter_reply_time = min_delta;
  return d;
}

}  // namespace controversy

#endif  // CONTROVERSY_BASELINE_FEATURES_HPP
