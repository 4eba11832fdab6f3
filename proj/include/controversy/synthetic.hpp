#ifndef CONTROVERSY_SYNTHETIC_HPP
#define CONTROVERSY_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "controversy/errors.hpp"
#include "controversy/rng.hpp"
#include "controversy/thread_model.hpp"

namespace controversy {

// Benchmark data generator. Controversial threads reply fast, run deep and
// reply mostly to users they do not follow; non-controversial threads are
// slower, flatter and reply mostly within follow relationships. Per-thread
// jitter keeps the classes overlapping instead of trivially separable.
struct ClassSynthParams {
  int n_threads = 0;
  int min_posts = 3;
  int max_posts = 150;
  double p_small_thread = 0.10;  // draw size uniformly from [min_posts, 12]
  double p_reply_nonfollowed = 0.5;
  double depth_bias = 0.5;  // probability a reply attaches below the root
  double time_scale_s = 600.0;  // mean inter-reply seconds
  double reciprocal_reply_prob = 0.05;
  double background_follow_density = 0.02;  // per ordered non-reply pair
};

struct SynthParams {
  std::uint64_t seed = 42;
  double new_user_prob = 0.8;
  double time_scale_sigma = 0.9;  // lognormal jitter on per-thread time scale
  double prob_jitter = 0.15;      // gaussian jitter on per-thread probabilities
  int n_pages_controversial = 11;
  int n_pages_non_controversial = 7;
  ClassSynthParams controversial;
  ClassSynthParams non_controversial;

  // Tuned so classes overlap on every single feature: baseline lands around
  // 0.75 accuracy, adding dyads around 0.88, adding triads around 0.94.
  static SynthParams defaults() {
    SynthParams p;
    p.controversial.n_threads = 660;
    p.controversial.p_reply_nonfollowed = 0.75;
    p.controversial.depth_bias = 0.60;
    p.controversial.time_scale_s = 400.0;
    p.controversial.reciprocal_reply_prob = 0.12;
    p.controversial.background_follow_density = 0.01;
    p.non_controversial.n_threads = 540;
    p.non_controversial.p_reply_nonfollowed = 0.35;
    p.non_controversial.depth_bias = 0.45;
    p.non_controversial.time_scale_s = 1200.0;
    p.non_controversial.reciprocal_reply_prob = 0.04;
    p.non_controversial.background_follow_density = 0.05;
    return p;
  }
};

inline void validate(const SynthParams& p) {
  auto check_class = [](const ClassSynthParams& c, const char* which) {
    auto prob = [&](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0))
        fail(ErrorCode::invalid_params, std::string(which) + "." + name + " must be in [0, 1]");
    };
    if (c.n_threads < 0)
      fail(ErrorCode::invalid_params, std::string(which) + ".n_threads must be >= 0");
    if (c.min_posts < 2)
      fail(ErrorCode::invalid_params, std::string(which) + ".min_posts must be >= 2");
    if (c.max_posts < c.min_posts)
      fail(ErrorCode::invalid_params, std::string(which) + ".max_posts must be >= min_posts");
    if (!(c.time_scale_s > 0.0))
      fail(ErrorCode::invalid_params, std::string(which) + ".time_scale_s must be > 0");
    prob(c.p_small_thread, "p_small_thread");
    prob(c.p_reply_nonfollowed, "p_reply_nonfollowed");
    prob(c.depth_bias, "depth_bias");
    prob(c.reciprocal_reply_prob, "reciprocal_reply_prob");
    prob(c.background_follow_density, "background_follow_density");
  };
  check_class(p.controversial, "controversial");
  check_class(p.non_controversial, "non_controversial");
  if (!(p.new_user_prob >= 0.0 && p.new_user_prob <= 1.0))
    fail(ErrorCode::invalid_params, "new_user_prob must be in [0, 1]");
  if (!(p.prob_jitter >= 0.0) || !(p.time_scale_sigma >= 0.0))
    fail(ErrorCode::invalid_params, "jitter parameters must be >= 0");
  if (p.n_pages_controversial < 1 || p.n_pages_non_controversial < 1)
    fail(ErrorCode::invalid_params, "page counts must be >= 1");
}

struct SynthResult {
  std::vector<ReplyTree> trees;
  FollowGraph follows;
};

namespace detail {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct SynthThreadDraws {
  double p_nonfollowed;
  double depth_bias;
  double time_scale;
  double reciprocal;
  double c_share;  // share of followed one-way dyads realized as C
};

inline SynthThreadDraws draw_thread_params(const ClassSynthParams& c, const SynthParams& p,
                                           Rng& rng) {
  SynthThreadDraws d;
  d.p_nonfollowed = clamp01(c.p_reply_nonfollowed + p.prob_jitter * rng.normal());
  d.depth_bias = clamp01(c.depth_bias + 2.0 * p.prob_jitter * rng.normal());
  d.time_scale = c.time_scale_s * std::exp(p.time_scale_sigma * rng.normal());
  d.reciprocal = clamp01(c.reciprocal_reply_prob + 0.5 * p.prob_jitter * rng.normal());
  d.c_share = 0.70 + 0.20 * rng.uniform();
  return d;
}

inline int draw_thread_size(const ClassSynthParams& c, Rng& rng) {
  int size;
  int small_cap = std::min(c.max_posts, 12);
  if (c.min_posts <= small_cap && rng.bernoulli(c.p_small_thread)) {
    size = static_cast<int>(rng.uniform_range(c.min_posts, small_cap));
  } else {
    double lo = std::max(static_cast<double>(c.min_posts), 13.0);
    lo = std::min(lo, static_cast<double>(c.max_posts));
    size = static_cast<int>(std::lround(rng.log_uniform(lo, static_cast<double>(c.max_posts))));
  }
  return std::clamp(size, c.min_posts, c.max_posts);
}

}  // namespace detail

inline SynthResult generate_synthetic(const SynthParams& params) {
  validate(params);
  SynthResult out;
  Rng rng(params.seed);
  std::int64_t next_user = 0;

  auto gen_class = [&](const ClassSynthParams& cls, ThreadLabel label, const char* page_prefix,
                       int n_pages) {
    for (int t = 0; t < cls.n_threads; ++t) {
      detail::SynthThreadDraws d = detail::draw_thread_params(cls, params, rng);
      int n_posts = detail::draw_thread_size(cls, rng);

      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s%02d/t%05d", page_prefix, t % n_pages, t);
      std::string thread_id(buf);

      std::vector<Post> posts;
      std::vector<std::string> users;  // first-appearance order
      std::vector<int> parent_of;      // creation-order parent links
      posts.reserve(static_cast<std::size_t>(n_posts));

      auto fresh_user = [&]() {
        char ubuf[32];
        std::snprintf(ubuf, sizeof(ubuf), "u%07lld", static_cast<long long>(next_user++));
        users.emplace_back(ubuf);
        return users.back();
      };

      posts.push_back({"p0", fresh_user(), std::nullopt, 0});
      parent_of.push_back(-1);

      for (int i = 1; i < n_posts; ++i) {
        int parent = 0;
        if (posts.size() > 1 && rng.bernoulli(d.depth_bias))
          parent = 1 + static_cast<int>(rng.uniform_int(posts.size() - 1));

        std::string author;
        if (parent_of[static_cast<std::size_t>(parent)] >= 0 && rng.bernoulli(d.reciprocal)) {
          // reply back along the chain: guarantees a reciprocal reply pair
          author = posts[static_cast<std::size_t>(parent_of[static_cast<std::size_t>(parent)])].author;
        } else if (rng.bernoulli(params.new_user_prob)) {
          author = fresh_user();
        } else {
          author = users[rng.uniform_int(users.size())];
        }

        std::int64_t ts = posts[static_cast<std::size_t>(parent)].ts + 1 +
                          static_cast<std::int64_t>(std::floor(rng.exponential(d.time_scale)));
        posts.push_back({"p" + std::to_string(i), author, posts[static_cast<std::size_t>(parent)].id, ts});
        parent_of.push_back(parent);
      }

      ReplyTree tree = build_reply_tree(std::move(posts), thread_id, label, Strictness::strict);
      ReplyGraph rg = project_reply_graph(tree);

      for (const std::string& u : users) out.follows.add_user(u);

      // collapse reply edges to unordered pairs with direction flags
      std::map<std::pair<std::string, std::string>, std::pair<bool, bool>> pairs;
      for (const auto& [key, mult] : rg.edges()) {
        (void)mult;
        const auto& [src, dst] = key;
        if (src == dst) continue;
        bool flip = src > dst;
        auto& entry = pairs[flip ? std::make_pair(dst, src) : std::make_pair(src, dst)];
        (flip ? entry.second : entry.first) = true;
      }

      // realize a dyad class per reply pair by adding exactly the follow
      // edges that class needs
      for (const auto& [pair_key, dirs] : pairs) {
        const auto& [u, v] = pair_key;
        bool reciprocal_reply = dirs.first && dirs.second;
        if (rng.bernoulli(d.p_nonfollowed)) continue;  // A or B: no follow edges
        if (reciprocal_reply) {
          if (rng.bernoulli(0.5)) {  // E
            out.follows.add_edge(u, v);
            out.follows.add_edge(v, u);
          } else {  // F
            if (rng.bernoulli(0.5))
              out.follows.add_edge(u, v);
            else
              out.follows.add_edge(v, u);
          }
        } else {
          const std::string& replier = dirs.first ? u : v;
          const std::string& repliee = dirs.first ? v : u;
          double roll = rng.uniform();
          double d_share = (1.0 - d.c_share) * 0.6;
          if (roll < d.c_share) {  // C
            out.follows.add_edge(replier, repliee);
          } else if (roll < d.c_share + d_share) {  // D
            out.follows.add_edge(repliee, replier);
          } else {  // G
            out.follows.add_edge(replier, repliee);
            out.follows.add_edge(repliee, replier);
          }
        }
      }

      // background follows between pairs without replies (feeds follow-only
      // triad legs without disturbing realized dyad classes)
      for (std::size_t i = 0; i < users.size(); ++i)
        for (std::size_t j = 0; j < users.size(); ++j) {
          if (i == j) continue;
          auto key = users[i] < users[j] ? std::make_pair(users[i], users[j])
                                         : std::make_pair(users[j], users[i]);
          if (pairs.count(key)) continue;
          if (rng.bernoulli(cls.background_follow_density))
            out.follows.add_edge(users[i], users[j]);
        }

      out.trees.push_back(std::move(tree));
    }
  };

  gen_class(params.controversial, ThreadLabel::controversial, "cp",
            params.n_pages_controversial);
  gen_class(params.non_controversial, ThreadLabel::non_controversial, "np",
            params.n_pages_non_controversial);
  return out;
}

// JSON parameter files override defaults field by field:
//   {"seed": 7, "controversial": {"n_threads": 100, ...}, ...}
inline SynthParams synth_params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, std::string("params JSON: ") + e.what());
  }
  SynthParams p = SynthParams::defaults();
  try {
    auto get = [](const nlohmann::json& obj, const char* key, auto& field) {
      if (obj.contains(key)) field = obj.at(key).get<std::decay_t<decltype(field)>>();
    };
    get(j, "seed", p.seed);
    get(j, "new_user_prob", p.new_user_prob);
    get(j, "time_scale_sigma", p.time_scale_sigma);
    get(j, "prob_jitter", p.prob_jitter);
    get(j, "n_pages_controversial", p.n_pages_controversial);
    get(j, "n_pages_non_controversial", p.n_pages_non_controversial);
    auto get_class = [&](const char* key, ClassSynthParams& c) {
      if (!j.contains(key)) return;
      const auto& jc = j.at(key);
      get(jc, "n_threads", c.n_threads);
      get(jc, "min_posts", c.min_posts);
      get(jc, "max_posts", c.max_posts);
      get(jc, "p_small_thread", c.p_small_thread);
      get(jc, "p_reply_nonfollowed", c.p_reply_nonfollowed);
      get(jc, "depth_bias", c.depth_bias);
      get(jc, "time_scale_s", c.time_scale_s);
      get(jc, "reciprocal_reply_prob", c.reciprocal_reply_prob);
      get(jc, "background_follow_density", c.background_follow_density);
    };
    get_class("controversial", p.controversial);
    get_class("non_controversial", p.non_controversial);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, std::string("params JSON: ") + e.what());
  }
  validate(p);
  return p;
}

}  // namespace controversy

#endif  // CONTROVERSY_SYNTHETIC_HPP
