#ifndef CONTROVERSY_MOTIFS_HPP
#define CONTROVERSY_MOTIFS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "controversy/thread_model.hpp"

namespace controversy {

// Joint reply/follow configuration of a user pair with at least one reply.
// With r = reply edges and f = follow edges between the two users:
//   A  one-way reply, no follow
//   B  reciprocal reply, no follow
//   C  one-way reply, follow in the reply direction
//   D  one-way reply, follow against the reply direction
//   E  reciprocal reply, reciprocal follow
//   F  reciprocal reply, one-way follow
//   G  one-way reply, reciprocal follow
enum class DyadClass : int { A = 0, B, C, D, E, F, G };

inline constexpr int kNumDyadClasses = 7;

inline char to_char(DyadClass c) { return static_cast<char>('A' + static_cast<int>(c)); }

// Pair connection types used for triad grouping.
enum class PairClass : int {
  follow_only = 0,      // FO
  reply_oneway = 1,     // RO1
  reply_reciprocal = 2, // RO2
  reply_follow = 3,     // RF: at least one reply and one follow, any orientation
};

inline const char* to_code(PairClass c) {
  switch (c) {
    case PairClass::follow_only: return "FO";
    case PairClass::reply_oneway: return "RO1";
    case PairClass::reply_reciprocal: return "RO2";
    case PairClass::reply_follow: return "RF";
  }
  return "?";
}

// 20 = multisets of size 3 over the four pair classes. Canonical encoding
// sorts the three codes in the order FO < RO1 < RO2 < RF and joins with '|';
// slots follow the same order.
inline constexpr int kNumTriadGroups = 20;

namespace detail {

struct TriadTables {
  std::array<std::string, kNumTriadGroups> codes;
  int index[4][4][4];  // sorted ranks -> group index

  TriadTables() {
    const char* names[4] = {"FO", "RO1", "RO2", "RF"};
    int next = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b)
        for (int c = b; c < 4; ++c) {
          codes[static_cast<std::size_t>(next)] =
              std::string(names[a]) + "|" + names[b] + "|" + names[c];
          index[a][b][c] = next++;
        }
  }
};

inline const TriadTables& triad_tables() {
  static const TriadTables tables;
  return tables;
}

}  // namespace detail

inline const std::array<std::string, kNumTriadGroups>& triad_group_codes() {
  return detail::triad_tables().codes;
}

inline int triad_group_index(PairClass x, PairClass y, PairClass z) {
  int a = static_cast<int>(x), b = static_cast<int>(y), c = static_cast<int>(z);
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return detail::triad_tables().index[a][b][c];
}

// Classification from edge booleans; precondition r_uv || r_vu. One-way
// replies are normalized so the replier is the source.
inline DyadClass classify_dyad_bits(bool r_uv, bool r_vu, bool f_uv, bool f_vu) {
  if (r_uv && r_vu) {
    if (f_uv && f_vu) return DyadClass::E;
    if (f_uv || f_vu) return DyadClass::F;
    return DyadClass::B;
  }
  // orient so the reply runs source -> target
  bool f_st = r_uv ? f_uv : f_vu;
  bool f_ts = r_uv ? f_vu : f_uv;
  if (f_st && f_ts) return DyadClass::G;
  if (f_st) return DyadClass::C;
  if (f_ts) return DyadClass::D;
  return DyadClass::A;
}

inline DyadClass classify_dyad(const std::string& u, const std::string& v, const ReplyGraph& rg,
                               const FollowGraph& fg) {
  if (u == v) fail(ErrorCode::self_pair, "dyad classification needs two distinct users");
  bool r_uv = rg.has_edge(u, v);
  bool r_vu = rg.has_edge(v, u);
  if (!r_uv && !r_vu)
    fail(ErrorCode::no_reply_edge, "no reply edge between '" + u + "' and '" + v + "'");
  return classify_dyad_bits(r_uv, r_vu, fg.has_edge(u, v), fg.has_edge(v, u));
}

struct DyadCensus {
  std::array<std::int64_t, kNumDyadClasses> counts{};
  std::array<double, kNumDyadClasses> freq{};
  std::int64_t total_pairs = 0;  // unordered pairs with >=1 reply
};

struct TriadCensus {
  std::array<std::int64_t, kNumTriadGroups> counts{};
  std::array<double, kNumTriadGroups> freq{};
  std::int64_t total_triangles = 0;  // overlay-closed triples with >=1 reply edge
};

struct TriangleStats {
  std::int64_t reply_triangles = 0;  // triples closed by reply edges alone
  std::int64_t possible_triples = 0; // C(n, 3)
  double ratio = 0.0;
};

struct MotifCensus {
  DyadCensus dyads;
  TriadCensus triads;
  TriangleStats triangles;
};

struct MotifFeatures {
  std::array<double, kNumDyadClasses> dyad_freq{};
  std::array<double, kNumTriadGroups> triad_freq{};
  double triangle_ratio = 0.0;
};

namespace detail {

// Dense per-thread view of the reply/follow overlay. Users are the (sorted)
// reply-graph users; follow lookups are restricted to this set up front so
// census cost does not depend on the global follow graph. Self-loops are
// not represented.
struct Overlay {
  int n = 0;
  std::vector<char> reply;   // n*n adjacency
  std::vector<char> follow;  // n*n adjacency
  std::vector<std::vector<int>> overlay_adj;  // sorted union neighborhoods
  std::vector<std::vector<int>> reply_adj;    // sorted undirected reply neighborhoods

  bool r(int i, int j) const { return reply[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] != 0; }
  bool f(int i, int j) const { return follow[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] != 0; }

  PairClass pair_class(int i, int j) const {
    bool any_reply = r(i, j) || r(j, i);
    bool any_follow = f(i, j) || f(j, i);
    if (any_reply && any_follow) return PairClass::reply_follow;
    if (any_reply) return (r(i, j) && r(j, i)) ? PairClass::reply_reciprocal : PairClass::reply_oneway;
    return PairClass::follow_only;
  }
};

inline Overlay build_overlay(const ReplyGraph& rg, const FollowGraph& fg) {
  Overlay o;
  const auto& users = rg.users();
  o.n = static_cast<int>(users.size());
  const std::size_t n = users.size();
  o.reply.assign(n * n, 0);
  o.follow.assign(n * n, 0);

  std::unordered_map<std::string, int> idx;
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) idx.emplace(users[i], static_cast<int>(i));

  for (const auto& [key, mult] : rg.edges()) {
    (void)mult;  // presence only
    int i = idx.at(key.first), j = idx.at(key.second);
    if (i == j) continue;
    o.reply[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = 1;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto* outs = fg.out_neighbors(users[i]);
    if (!outs) continue;
    for (const auto& v : *outs) {
      auto it = idx.find(v);
      if (it == idx.end()) continue;
      o.follow[i * n + static_cast<std::size_t>(it->second)] = 1;
    }
  }

  o.overlay_adj.assign(n, {});
  o.reply_adj.assign(n, {});
  for (int i = 0; i < o.n; ++i)
    for (int j = i + 1; j < o.n; ++j) {
      bool any_reply = o.r(i, j) || o.r(j, i);
      bool any = any_reply || o.f(i, j) || o.f(j, i);
      if (any) {
        o.overlay_adj[static_cast<std::size_t>(i)].push_back(j);
        o.overlay_adj[static_cast<std::size_t>(j)].push_back(i);
      }
      if (any_reply) {
        o.reply_adj[static_cast<std::size_t>(i)].push_back(j);
        o.reply_adj[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  return o;
}

// Calls fn(i, j, k) with i < j < k for each triangle of adj (sorted lists).
template <typename F>
inline void for_each_triangle(const std::vector<std::vector<int>>& adj, F&& fn) {
  const int n = static_cast<int>(adj.size());
  for (int i = 0; i < n; ++i) {
    for (int j : adj[static_cast<std::size_t>(i)]) {
      if (j <= i) continue;
      // two-pointer intersection of N(i) and N(j), keeping k > j
      const auto& a = adj[static_cast<std::size_t>(i)];
      const auto& b = adj[static_cast<std::size_t>(j)];
      std::size_t p = 0, q = 0;
      while (p < a.size() && q < b.size()) {
        if (a[p] < b[q]) {
          ++p;
        } else if (a[p] > b[q]) {
          ++q;
        } else {
          if (a[p] > j) fn(i, j, a[p]);
          ++p;
          ++q;
        }
      }
    }
  }
}

}  // namespace detail

// Census over all unordered user pairs with at least one reply between
// them. Self-loops never form a pair. Frequencies normalize by the pair
// count and are all-zero when no pair qualifies.
inline DyadCensus dyadic_census(const ReplyGraph& rg, const FollowGraph& fg) {
  detail::Overlay o = detail::build_overlay(rg, fg);
  DyadCensus census;
  for (int i = 0; i < o.n; ++i)
    for (int j = i + 1; j < o.n; ++j) {
      bool r_ij = o.r(i, j), r_ji = o.r(j, i);
      if (!r_ij && !r_ji) continue;
      DyadClass c = classify_dyad_bits(r_ij, r_ji, o.f(i, j), o.f(j, i));
      ++census.counts[static_cast<std::size_t>(c)];
      ++census.total_pairs;
    }
  if (census.total_pairs > 0)
    for (int c = 0; c < kNumDyadClasses; ++c)
      census.freq[static_cast<std::size_t>(c)] =
          static_cast<double>(census.counts[static_cast<std::size_t>(c)]) / static_cast<double>(census.total_pairs);
  return census;
}

// Census over user triples closed in the reply/follow overlay (every pair
// connected by at least one edge of either kind) that contain at least one
// reply edge. Each qualifying triangle lands in exactly one group.
inline TriadCensus triadic_census(const ReplyGraph& rg, const FollowGraph& fg) {
  detail::Overlay o = detail::build_overlay(rg, fg);
  TriadCensus census;
  detail::for_each_triangle(o.overlay_adj, [&](int i, int j, int k) {
    PairClass a = o.pair_class(i, j);
    PairClass b = o.pair_class(i, k);
    PairClass c = o.pair_class(j, k);
    if (a == PairClass::follow_only && b == PairClass::follow_only && c == PairClass::follow_only)
      return;  // static network structure, not discussion structure
    ++census.counts[static_cast<std::size_t>(triad_group_index(a, b, c))];
    ++census.total_triangles;
  });
  if (census.total_triangles > 0)
    for (int g = 0; g < kNumTriadGroups; ++g)
      census.freq[static_cast<std::size_t>(g)] =
          static_cast<double>(census.counts[static_cast<std::size_t>(g)]) / static_cast<double>(census.total_triangles);
  return census;
}

// Triples closed by reply edges alone over all C(n,3) triples of the
// thread's users; 0 when fewer than 3 users.
inline TriangleStats triangle_stats(const ReplyGraph& rg) {
  TriangleStats stats;
  const std::int64_t n = static_cast<std::int64_t>(rg.users().size());
  stats.possible_triples = n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
  if (stats.possible_triples == 0) return stats;

  detail::Overlay o = detail::build_overlay(rg, FollowGraph{});
  detail::for_each_triangle(o.reply_adj, [&](int, int, int) { ++stats.reply_triangles; });
  stats.ratio = static_cast<double>(stats.reply_triangles) / static_cast<double>(stats.possible_triples);
  return stats;
}

inline double triangle_ratio(const ReplyGraph& rg) { return triangle_stats(rg).ratio; }

inline MotifCensus motif_census(const ReplyGraph& rg, const FollowGraph& fg) {
  MotifCensus census;
  census.dyads = dyadic_census(rg, fg);
  census.triads = triadic_census(rg, fg);
  census.triangles = triangle_stats(rg);
  return census;
}

inline MotifFeatures motif_features(const ReplyGraph& rg, const FollowGraph& fg) {
  MotifCensus census = motif_census(rg, fg);
  MotifFeatures f;
  f.dyad_freq = census.dyads.freq;
  f.triad_freq = census.triads.freq;
  f.triangle_ratio = census.triangles.ratio;
  return f;
}

}  // namespace controversy

#endif  // CONTROVERSY_MOTIFS_HPP
