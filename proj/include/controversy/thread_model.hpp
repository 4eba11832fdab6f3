#ifndef CONTROVERSY_THREAD_MODEL_HPP
#define CONTROVERSY_THREAD_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "controversy/errors.hpp"

namespace controversy {

enum class ThreadLabel { controversial, non_controversial };

inline const char* to_string(ThreadLabel l) {
  return l == ThreadLabel::controversial ? "controversial" : "non-controversial";
}

inline std::optional<ThreadLabel> parse_thread_label(const std::string& s) {
  if (s == "controversial") return ThreadLabel::controversial;
  if (s == "non-controversial") return ThreadLabel::non_controversial;
  return std::nullopt;
}

// Classifier targets: +1 is controversial, the positive class.
inline int label_to_sign(ThreadLabel l) { return l == ThreadLabel::controversial ? 1 : -1; }
inline ThreadLabel sign_to_label(int s) {
  return s > 0 ? ThreadLabel::controversial : ThreadLabel::non_controversial;
}

enum class Strictness { lenient, strict };

// One content item. `parent` is absent exactly for the thread root.
struct Post {
  std::string id;
  std::string author;
  std::optional<std::string> parent;
  std::int64_t ts = 0;  // seconds since epoch

  bool operator==(const Post&) const = default;
};

// Immutable per-thread content tree. Posts are stored sorted by
// (timestamp, id); structure is kept as parent/children index links.
class ReplyTree {
 public:
  const std::string& thread_id() const { return thread_id_; }
  const std::optional<ThreadLabel>& label() const { return label_; }
  const std::vector<Post>& posts() const { return posts_; }
  std::size_t size() const { return posts_.size(); }

  int root_index() const { return root_; }
  const Post& root() const { return posts_[static_cast<std::size_t>(root_)]; }

  // -1 for the root.
  int parent_index(std::size_t i) const { return parent_[i]; }
  const std::vector<int>& children(std::size_t i) const { return children_[i]; }

  int index_of(const std::string& post_id) const {
    auto it = index_.find(post_id);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  friend ReplyTree build_reply_tree(std::vector<Post>, std::string, std::optional<ThreadLabel>,
                                    Strictness, std::vector<std::string>*);

  std::string thread_id_;
  std::optional<ThreadLabel> label_;
  std::vector<Post> posts_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::unordered_map<std::string, int> index_;
  int root_ = -1;
};

// Global directed follow graph: edge (u, v) means u follows v.
class FollowGraph {
 public:
  void add_user(const std::string& u) { adj_[u]; }

  // Returns false (and adds nothing) for self-loops; callers warn as needed.
  bool add_edge(const std::string& follower, const std::string& followee) {
    if (follower == followee) return false;
    adj_[followee];
    bool inserted = adj_[follower].insert(followee).second;
    if (inserted) ++n_edges_;
    return true;
  }

  bool has_edge(const std::string& follower, const std::string& followee) const {
    auto it = adj_.find(follower);
    return it != adj_.end() && it->second.count(followee) > 0;
  }

  const std::unordered_set<std::string>* out_neighbors(const std::string& u) const {
    auto it = adj_.find(u);
    return it == adj_.end() ? nullptr : &it->second;
  }

  std::size_t user_count() const { return adj_.size(); }
  std::size_t edge_count() const { return n_edges_; }

  bool has_user(const std::string& u) const { return adj_.count(u) > 0; }

  std::vector<std::string> sorted_users() const {
    std::vector<std::string> users;
    users.reserve(adj_.size());
    for (const auto& [u, _] : adj_) users.push_back(u);
    std::sort(users.begin(), users.end());
    return users;
  }

  std::vector<std::pair<std::string, std::string>> sorted_edges() const {
    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(n_edges_);
    for (const auto& [u, outs] : adj_)
      for (const auto& v : outs) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
  }

 private:
  std::unordered_map<std::string, std::unordered_set<std::string>> adj_;
  std::size_t n_edges_ = 0;
};

// Per-thread user projection: edge (u, v) with multiplicity m means u wrote
// m posts whose parent post was written by v. Self-loops are kept (a user
// replying to their own post); motif censuses skip them.
class ReplyGraph {
 public:
  using EdgeMap = std::map<std::pair<std::string, std::string>, int>;

  static ReplyGraph from_edges(std::vector<std::string> users, EdgeMap edges) {
    ReplyGraph g;
    for (const auto& [key, mult] : edges) {
      if (mult <= 0) fail(ErrorCode::invalid_params, "reply edge multiplicity must be positive");
      users.push_back(key.first);
      users.push_back(key.second);
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    g.users_ = std::move(users);
    g.edges_ = std::move(edges);
    return g;
  }

  const std::vector<std::string>& users() const { return users_; }  // sorted, unique
  const EdgeMap& edges() const { return edges_; }

  bool has_edge(const std::string& u, const std::string& v) const {
    return edges_.count({u, v}) > 0;
  }

  int multiplicity(const std::string& u, const std::string& v) const {
    auto it = edges_.find({u, v});
    return it == edges_.end() ? 0 : it->second;
  }

  // Distinct ordered pairs, self-loops included.
  std::size_t simple_edge_count() const { return edges_.size(); }

 private:
  std::vector<std::string> users_;
  EdgeMap edges_;
};

// Validates and assembles a ReplyTree. In lenient mode a reply timestamped
// before its parent only produces a warning; strict mode rejects it.
inline ReplyTree build_reply_tree(std::vector<Post> posts, std::string thread_id,
                                  std::optional<ThreadLabel> label = std::nullopt,
                                  Strictness strictness = Strictness::lenient,
                                  std::vector<std::string>* warnings = nullptr) {
  if (posts.empty()) fail(ErrorCode::empty_thread, "thread '" + thread_id + "' has no posts");

  std::sort(posts.begin(), posts.end(), [](const Post& a, const Post& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.id < b.id;
  });

  ReplyTree tree;
  tree.thread_id_ = std::move(thread_id);
  tree.label_ = label;

  const std::size_t n = posts.size();
  tree.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (posts[i].ts < 0)
      fail(ErrorCode::negative_timestamp,
           "thread '" + tree.thread_id_ + "': post '" + posts[i].id + "' has negative timestamp");
    if (!tree.index_.emplace(posts[i].id, static_cast<int>(i)).second)
      fail(ErrorCode::duplicate_post_id,
           "thread '" + tree.thread_id_ + "': duplicate post id '" + posts[i].id + "'");
  }

  tree.parent_.assign(n, -1);
  int root = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!posts[i].parent) {
      if (root >= 0)
        fail(ErrorCode::multiple_roots, "thread '" + tree.thread_id_ + "': posts '" +
                                            posts[static_cast<std::size_t>(root)].id + "' and '" +
                                            posts[i].id + "' both lack a parent");
      root = static_cast<int>(i);
      continue;
    }
    auto it = tree.index_.find(*posts[i].parent);
    if (it == tree.index_.end())
      fail(ErrorCode::missing_parent, "thread '" + tree.thread_id_ + "': post '" + posts[i].id +
                                          "' references missing parent '" + *posts[i].parent + "'");
    tree.parent_[i] = it->second;
  }
  if (root < 0)
    fail(ErrorCode::cycle_detected,
         "thread '" + tree.thread_id_ + "': no root post (parent links form a cycle)");
  tree.root_ = root;

  tree.children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    if (tree.parent_[i] >= 0) tree.children_[static_cast<std::size_t>(tree.parent_[i])].push_back(static_cast<int>(i));

  // Everything must be reachable from the root; leftovers imply a cycle
  // among posts that all have in-thread parents.
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[static_cast<std::size_t>(root)] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    ++reached;
    for (int c : tree.children_[static_cast<std::size_t>(cur)]) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        stack.push_back(c);
      }
    }
  }
  if (reached != n)
    fail(ErrorCode::cycle_detected,
         "thread '" + tree.thread_id_ + "': parent links contain a cycle");

  for (std::size_t i = 0; i < n; ++i) {
    int p = tree.parent_[i];
    if (p < 0) continue;
    if (posts[i].ts < posts[static_cast<std::size_t>(p)].ts) {
      std::string msg = "thread '" + tree.thread_id_ + "': post '" + posts[i].id +
                        "' is timestamped before its parent";
      if (strictness == Strictness::strict) fail(ErrorCode::non_monotonic_timestamp, msg);
      if (warnings) warnings->push_back("warning: " + msg);
    }
  }

  tree.posts_ = std::move(posts);
  return tree;
}

inline ReplyGraph project_reply_graph(const ReplyTree& tree) {
  std::vector<std::string> users;
  users.reserve(tree.size());
  for (const Post& p : tree.posts()) users.push_back(p.author);

  ReplyGraph::EdgeMap edges;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    int p = tree.parent_index(i);
    if (p < 0) continue;
    ++edges[{tree.posts()[i].author, tree.posts()[static_cast<std::size_t>(p)].author}];
  }
  return ReplyGraph::from_edges(std::move(users), std::move(edges));
}

inline std::size_t count_users(const ReplyTree& tree) {
  std::unordered_set<std::string> authors;
  authors.reserve(tree.size());
  for (const Post& p : tree.posts()) authors.insert(p.author);
  return authors.size();
}

// One subtree per direct reply to the root, covering all its descendants.
// Subtree ids are "<thread_id>/<subtree root post id>"; labels are unset.
inline std::vector<ReplyTree> direct_reply_subtrees(const ReplyTree& tree) {
  std::vector<ReplyTree> out;
  for (int child : tree.children(static_cast<std::size_t>(tree.root_index()))) {
    std::vector<Post> sub_posts;
    std::vector<int> stack{child};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      sub_posts.push_back(tree.posts()[static_cast<std::size_t>(cur)]);
      for (int c : tree.children(static_cast<std::size_t>(cur))) stack.push_back(c);
    }
    for (Post& p : sub_posts)
      if (p.id == tree.posts()[static_cast<std::size_t>(child)].id) p.parent.reset();
    out.push_back(build_reply_tree(std::move(sub_posts),
                                   tree.thread_id() + "/" + tree.posts()[static_cast<std::size_t>(child)].id));
  }
  return out;
}

}  // namespace controversy

#endif  // CONTROVERSY_THREAD_MODEL_HPP
