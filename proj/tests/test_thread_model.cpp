#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "controversy/thread_model.hpp"
#include "test_support.hpp"

using namespace controversy;

namespace {

Post post(const std::string& id, const std::string& author, std::optional<std::string> parent,
          std::int64_t ts) {
  return Post{id, author, std::move(parent), ts};
}

}  // namespace

TEST_CASE("build_reply_tree accepts a single post") {
  ReplyTree tree = build_reply_tree({post("1", "a", std::nullopt, 0)}, "t");
  CHECK(tree.size() == 1);
  CHECK(tree.root().id == "1");
  CHECK(tree.children(static_cast<std::size_t>(tree.root_index())).empty());
}

TEST_CASE("build_reply_tree builds a 4-post tree") {
  ReplyTree tree = build_reply_tree(
      {post("1", "a", std::nullopt, 0), post("2", "b", "1", 1), post("3", "c", "1", 2),
       post("4", "d", "2", 3)},
      "t");
  CHECK(tree.size() == 4);
  CHECK(tree.root().id == "1");
  std::size_t edges = 0;
  for (std::size_t i = 0; i < tree.size(); ++i)
    if (tree.parent_index(i) >= 0) ++edges;
  CHECK(edges == 3);
}

TEST_CASE("build_reply_tree rejects bad input") {
  CHECK_THROWS_MATCHES(build_reply_tree({}, "t"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::empty_thread;
                       }));
  CHECK_THROWS_MATCHES(
      build_reply_tree({post("1", "a", std::nullopt, 0), post("2", "b", "9", 1)}, "t"), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::missing_parent; }));
  CHECK_THROWS_MATCHES(
      build_reply_tree({post("1", "a", std::nullopt, 0), post("2", "b", std::nullopt, 1)}, "t"),
      Error, Catch::Matchers::Predicate<Error>(
                 [](const Error& e) { return e.code() == ErrorCode::multiple_roots; }));
  // 1 <- 2 <- 3 <- 2 : posts 2 and 3 form a parent cycle next to a valid root
  CHECK_THROWS_MATCHES(
      build_reply_tree(
          {post("1", "a", std::nullopt, 0), post("2", "b", "3", 1), post("3", "c", "2", 2)}, "t"),
      Error, Catch::Matchers::Predicate<Error>(
                 [](const Error& e) { return e.code() == ErrorCode::cycle_detected; }));
  CHECK_THROWS_MATCHES(
      build_reply_tree({post("1", "a", std::nullopt, 0), post("1", "b", "1", 1)}, "t"), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::duplicate_post_id; }));
}

TEST_CASE("timestamp order is an error only in strict mode") {
  std::vector<Post> posts{post("1", "a", std::nullopt, 100), post("2", "b", "1", 50)};
  std::vector<std::string> warnings;
  ReplyTree tree = build_reply_tree(posts, "t", std::nullopt, Strictness::lenient, &warnings);
  CHECK(tree.size() == 2);
  CHECK(warnings.size() == 1);
  CHECK_THROWS_MATCHES(build_reply_tree(posts, "t", std::nullopt, Strictness::strict), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::non_monotonic_timestamp;
                       }));
}

TEST_CASE("posts are stored in timestamp order with id tie-break") {
  ReplyTree tree = build_reply_tree(
      {post("z", "a", std::nullopt, 0), post("b", "b", "z", 5), post("a", "c", "z", 5)}, "t");
  CHECK(tree.posts()[0].id == "z");
  CHECK(tree.posts()[1].id == "a");
  CHECK(tree.posts()[2].id == "b");
}

TEST_CASE("project_reply_graph merges repeat replies into multiplicity") {
  ReplyTree tree = build_reply_tree(
      {post("1", "a", std::nullopt, 0), post("2", "b", "1", 1), post("3", "b", "1", 2)}, "t");
  ReplyGraph rg = project_reply_graph(tree);
  CHECK(rg.users() == std::vector<std::string>{"a", "b"});
  CHECK(rg.multiplicity("b", "a") == 2);
  CHECK(rg.simple_edge_count() == 1);
}

TEST_CASE("project_reply_graph keeps self-loops") {
  ReplyTree tree =
      build_reply_tree({post("1", "a", std::nullopt, 0), post("2", "a", "1", 1)}, "t");
  ReplyGraph rg = project_reply_graph(tree);
  CHECK(rg.multiplicity("a", "a") == 1);
  CHECK(rg.users().size() == 1);
}

TEST_CASE("project_reply_graph on a 4-post chain with a back-reply") {
  // a posts root, b->a, c->b, a->c
  ReplyTree tree = build_reply_tree(
      {post("1", "a", std::nullopt, 0), post("2", "b", "1", 1), post("3", "c", "2", 2),
       post("4", "a", "3", 3)},
      "t");
  ReplyGraph rg = project_reply_graph(tree);
  CHECK(rg.users().size() == 3);
  CHECK(rg.multiplicity("b", "a") == 1);
  CHECK(rg.multiplicity("c", "b") == 1);
  CHECK(rg.multiplicity("a", "c") == 1);
  CHECK(rg.simple_edge_count() == 3);
}

TEST_CASE("count_users counts distinct authors including the root author") {
  CHECK(count_users(build_reply_tree({post("1", "a", std::nullopt, 0)}, "t")) == 1);
  ReplyTree tree = build_reply_tree(
      {post("1", "a", std::nullopt, 0), post("2", "b", "1", 1), post("3", "b", "1", 2),
       post("4", "c", "2", 3)},
      "t");
  CHECK(count_users(tree) == 3);
  // >k semantics: a 3-user thread passes k=2 but not k=3
  CHECK(count_users(tree) > 2);
  CHECK_FALSE(count_users(tree) > 3);
}

TEST_CASE("direct_reply_subtrees splits below the root") {
  ReplyTree lone = build_reply_tree({post("1", "a", std::nullopt, 0)}, "t");
  CHECK(direct_reply_subtrees(lone).empty());

  // root with children x (two descendants) and y
  ReplyTree tree = build_reply_tree(
      {post("r", "a", std::nullopt, 0), post("x", "b", "r", 1), post("y", "c", "r", 2),
       post("x1", "d", "x", 3), post("x2", "e", "x1", 4)},
      "t");
  auto subs = direct_reply_subtrees(tree);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0].size() == 3);
  CHECK(subs[0].root().id == "x");
  CHECK(subs[0].thread_id() == "t/x");
  CHECK_FALSE(subs[0].label().has_value());
  CHECK(subs[1].size() == 1);
  CHECK(subs[1].root().id == "y");
}

TEST_CASE("tree invariants hold on random trees") {
  testsupport::Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    ReplyTree tree = testsupport::random_tree(rng, "rt" + std::to_string(trial));
    // |R| = |C| - 1
    std::size_t edges = 0;
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (tree.parent_index(i) >= 0) ++edges;
    CHECK(edges == tree.size() - 1);

    // multiplicities sum to |R|
    ReplyGraph rg = project_reply_graph(tree);
    std::int64_t mult_sum = 0;
    for (const auto& [key, mult] : rg.edges()) {
      (void)key;
      mult_sum += mult;
    }
    CHECK(mult_sum == static_cast<std::int64_t>(edges));

    CHECK(count_users(tree) <= tree.size());

    // subtrees partition the non-root posts
    std::size_t total = 0;
    for (const ReplyTree& sub : direct_reply_subtrees(tree)) total += sub.size();
    CHECK(total == tree.size() - 1);
  }
}

TEST_CASE("projection is independent of input post order") {
  testsupport::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    ReplyTree tree = testsupport::random_tree(rng, "perm");
    std::vector<Post> shuffled = tree.posts();
    rng.shuffle(shuffled);
    ReplyTree rebuilt = build_reply_tree(shuffled, "perm");
    CHECK(rebuilt.posts() == tree.posts());
    CHECK(project_reply_graph(rebuilt).edges() == project_reply_graph(tree).edges());
  }
}

TEST_CASE("follow graph drops self-loops and deduplicates") {
  FollowGraph fg;
  CHECK(fg.add_edge("a", "b"));
  CHECK(fg.add_edge("a", "b"));  // duplicate insert is fine
  CHECK_FALSE(fg.add_edge("a", "a"));
  CHECK(fg.edge_count() == 1);
  CHECK(fg.has_edge("a", "b"));
  CHECK_FALSE(fg.has_edge("b", "a"));
}
