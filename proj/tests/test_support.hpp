#ifndef CONTROVERSY_TEST_SUPPORT_HPP
#define CONTROVERSY_TEST_SUPPORT_HPP

// Test-only oracles. Everything here is deliberately brute force and kept
// independent of the census implementations it checks.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "controversy/motifs.hpp"
#include "controversy/rng.hpp"
#include "controversy/thread_model.hpp"

namespace testsupport {

using controversy::DyadClass;
using controversy::FollowGraph;
using controversy::PairClass;
using controversy::Post;
using controversy::ReplyGraph;
using controversy::ReplyTree;
using controversy::Rng;

// Hand-transcribed truth table over the 12 ordered (reply, follow)
// edge-subset configurations with at least one reply.
struct DyadTruthRow {
  bool r_uv, r_vu, f_uv, f_vu;
  DyadClass expected;
};

inline const std::array<DyadTruthRow, 12>& dyad_truth_table() {
  static const std::array<DyadTruthRow, 12> table = {{
      {true, false, false, false, DyadClass::A},
      {true, false, true, false, DyadClass::C},
      {true, false, false, true, DyadClass::D},
      {true, false, true, true, DyadClass::G},
      {false, true, false, false, DyadClass::A},
      {false, true, true, false, DyadClass::D},
      {false, true, false, true, DyadClass::C},
      {false, true, true, true, DyadClass::G},
      {true, true, false, false, DyadClass::B},
      {true, true, true, false, DyadClass::F},
      {true, true, false, true, DyadClass::F},
      {true, true, true, true, DyadClass::E},
  }};
  return table;
}

inline DyadClass oracle_dyad_class(bool r_uv, bool r_vu, bool f_uv, bool f_vu) {
  for (const DyadTruthRow& row : dyad_truth_table())
    if (row.r_uv == r_uv && row.r_vu == r_vu && row.f_uv == f_uv && row.f_vu == f_vu)
      return row.expected;
  throw std::logic_error("oracle_dyad_class: configuration has no reply edge");
}

inline PairClass oracle_pair_class(const ReplyGraph& rg, const FollowGraph& fg,
                                   const std::string& u, const std::string& v) {
  bool any_reply = rg.has_edge(u, v) || rg.has_edge(v, u);
  bool any_follow = fg.has_edge(u, v) || fg.has_edge(v, u);
  if (any_reply && any_follow) return PairClass::reply_follow;
  if (any_reply)
    return (rg.has_edge(u, v) && rg.has_edge(v, u)) ? PairClass::reply_reciprocal
                                                    : PairClass::reply_oneway;
  if (any_follow) return PairClass::follow_only;
  throw std::logic_error("oracle_pair_class: pair is not connected");
}

// Pair-by-pair dyad counts over all unordered pairs with >=1 reply.
inline std::array<std::int64_t, controversy::kNumDyadClasses> oracle_dyad_counts(
    const ReplyGraph& rg, const FollowGraph& fg) {
  std::array<std::int64_t, controversy::kNumDyadClasses> counts{};
  const auto& users = rg.users();
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      bool r_uv = rg.has_edge(users[i], users[j]);
      bool r_vu = rg.has_edge(users[j], users[i]);
      if (!r_uv && !r_vu) continue;
      DyadClass c = oracle_dyad_class(r_uv, r_vu, fg.has_edge(users[i], users[j]),
                                      fg.has_edge(users[j], users[i]));
      ++counts[static_cast<std::size_t>(c)];
    }
  return counts;
}

// All-triples triad group counts: overlay-closed triples with >=1 reply.
inline std::array<std::int64_t, controversy::kNumTriadGroups> oracle_triad_counts(
    const ReplyGraph& rg, const FollowGraph& fg) {
  std::array<std::int64_t, controversy::kNumTriadGroups> counts{};
  const auto& users = rg.users();
  auto connected = [&](const std::string& a, const std::string& b) {
    return rg.has_edge(a, b) || rg.has_edge(b, a) || fg.has_edge(a, b) || fg.has_edge(b, a);
  };
  auto has_reply = [&](const std::string& a, const std::string& b) {
    return rg.has_edge(a, b) || rg.has_edge(b, a);
  };
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t j = i + 1; j < users.size(); ++j)
      for (std::size_t k = j + 1; k < users.size(); ++k) {
        const auto& a = users[i];
        const auto& b = users[j];
        const auto& c = users[k];
        if (!connected(a, b) || !connected(a, c) || !connected(b, c)) continue;
        if (!has_reply(a, b) && !has_reply(a, c) && !has_reply(b, c)) continue;
        int g = controversy::triad_group_index(oracle_pair_class(rg, fg, a, b),
                                               oracle_pair_class(rg, fg, a, c),
                                               oracle_pair_class(rg, fg, b, c));
        ++counts[static_cast<std::size_t>(g)];
      }
  return counts;
}

inline std::int64_t oracle_reply_triangles(const ReplyGraph& rg) {
  std::int64_t count = 0;
  const auto& users = rg.users();
  auto has_reply = [&](const std::string& a, const std::string& b) {
    return rg.has_edge(a, b) || rg.has_edge(b, a);
  };
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t j = i + 1; j < users.size(); ++j)
      for (std::size_t k = j + 1; k < users.size(); ++k)
        if (has_reply(users[i], users[j]) && has_reply(users[i], users[k]) &&
            has_reply(users[j], users[k]))
          ++count;
  return count;
}

inline double oracle_triangle_ratio(const ReplyGraph& rg) {
  std::int64_t n = static_cast<std::int64_t>(rg.users().size());
  if (n < 3) return 0.0;
  return static_cast<double>(oracle_reply_triangles(rg)) /
         static_cast<double>(n * (n - 1) * (n - 2) / 6);
}

// Random overlay: n users, reply/follow edges drawn independently per
// ordered pair; occasional reply self-loops to exercise the skip logic.
struct RandomOverlay {
  ReplyGraph rg;
  FollowGraph fg;
};

inline RandomOverlay random_overlay(Rng& rng, int max_users = 8) {
  int n = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_users)));
  double p_reply = 0.05 + 0.5 * rng.uniform();
  double p_follow = 0.05 + 0.5 * rng.uniform();

  std::vector<std::string> users;
  for (int i = 0; i < n; ++i) users.push_back("u" + std::to_string(i));

  ReplyGraph::EdgeMap edges;
  RandomOverlay out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        if (rng.bernoulli(0.05)) edges[{users[static_cast<std::size_t>(i)], users[static_cast<std::size_t>(j)]}] = 1;
        continue;
      }
      if (rng.bernoulli(p_reply))
        edges[{users[static_cast<std::size_t>(i)], users[static_cast<std::size_t>(j)]}] =
            1 + static_cast<int>(rng.uniform_int(3));
      if (rng.bernoulli(p_follow))
        out.fg.add_edge(users[static_cast<std::size_t>(i)], users[static_cast<std::size_t>(j)]);
    }
  }
  out.rg = ReplyGraph::from_edges(users, std::move(edges));
  for (const auto& u : users) out.fg.add_user(u);
  return out;
}

// Random valid reply tree: each post attaches to a uniformly random earlier
// post, timestamps non-decreasing along arcs.
inline ReplyTree random_tree(Rng& rng, const std::string& thread_id, int max_posts = 40,
                             std::optional<controversy::ThreadLabel> label = std::nullopt) {
  int n = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_posts)));
  std::vector<Post> posts;
  std::vector<std::int64_t> ts{0};
  posts.push_back({"p0", "a0", std::nullopt, 0});
  int n_authors = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  for (int i = 1; i < n; ++i) {
    std::size_t parent = rng.uniform_int(static_cast<std::uint64_t>(i));
    std::int64_t t = ts[parent] + static_cast<std::int64_t>(rng.uniform_int(5000));
    std::string author = "a" + std::to_string(rng.uniform_int(static_cast<std::uint64_t>(n_authors)));
    posts.push_back({"p" + std::to_string(i), author, posts[parent].id, t});
    ts.push_back(t);
  }
  return controversy::build_reply_tree(std::move(posts), thread_id, label);
}

}  // namespace testsupport

#endif  // CONTROVERSY_TEST_SUPPORT_HPP
