#include <doctest.h>

#include <algorithm>
#include <set>

#include "harness.hpp"
#include "sgq/errors.hpp"
#include "sgq/planner.hpp"

using namespace sgq;
using sgq::testing::corpus;
using sgq::testing::make_query;

namespace {

GraphStatistics stats_of(std::map<std::string, std::uint64_t> counts) {
  GraphStatistics s;
  for (const auto& [t, n] : counts) s.total_edges += n;
  s.edge_type_counts = std::move(counts);
  return s;
}

// Checks the decomposition invariants plus tree Properties 1, 2 and 4.
void check_plan_and_tree(const QueryGraph& q, const DecompositionPlan& plan,
                         const SJTree& tree, int max_leaf_size) {
  std::set<int> covered;
  for (const auto& leaf : plan.leaves) {
    CHECK(!leaf.qeids.empty());
    CHECK(int(leaf.qeids.size()) <= max_leaf_size);
    for (int qeid : leaf.qeids) CHECK(covered.insert(qeid).second);
  }
  CHECK(covered.size() == q.edges.size());  // partition

  // Property 1: root edge set equals the query
  const SJTreeNode& root = tree.node(tree.root_id());
  CHECK(root.query_edges.size() == q.edges.size());

  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const SJTreeNode& n = tree.node(int(i));
    if (n.is_leaf()) continue;
    const SJTreeNode& l = tree.node(n.left);
    const SJTreeNode& r = tree.node(n.right);

    // Property 2: node = union of children, edges and vertices
    std::set<int> edges(l.query_edges.begin(), l.query_edges.end());
    edges.insert(r.query_edges.begin(), r.query_edges.end());
    CHECK(std::vector<int>(edges.begin(), edges.end()) == n.query_edges);
    std::set<std::string> verts(l.subgraph_vertices.begin(),
                                l.subgraph_vertices.end());
    verts.insert(r.subgraph_vertices.begin(), r.subgraph_vertices.end());
    CHECK(std::vector<std::string>(verts.begin(), verts.end()) ==
          n.subgraph_vertices);

    // Property 4: cut = nonempty vertex intersection of children
    std::vector<std::string> cut;
    std::set_intersection(l.subgraph_vertices.begin(),
                          l.subgraph_vertices.end(),
                          r.subgraph_vertices.begin(),
                          r.subgraph_vertices.end(), std::back_inserter(cut));
    CHECK(cut == n.cut_vertices);
    CHECK(!cut.empty());
  }
}

}  // namespace

TEST_CASE("a query that fits one leaf becomes a single-node tree") {
  QueryGraph q = make_query("p2", 10, {"A", "B", "C"},
                            {{"A", "B", "x"}, {"B", "C", "x"}});
  GraphStatistics s = stats_of({{"x", 10}, {"y", 10}});
  DecompositionPlan plan = decompose(q, s, 2);
  REQUIRE(plan.leaves.size() == 1);
  CHECK(plan.leaves[0].qeids == std::vector<int>{0, 1});

  SJTree tree = build_sj_tree(plan, q);
  CHECK(tree.node_count() == 1);
  CHECK(tree.root_id() == 0);
  CHECK(tree.node(0).is_leaf());
  CHECK(tree.node(0).is_root());
  CHECK(tree.node(0).query_edges == std::vector<int>{0, 1});
}

TEST_CASE("the rare edge type is picked first under size-1 leaves") {
  QueryGraph q = make_query(
      "p3", 10, {"A", "B", "C", "D"},
      {{"A", "B", "x"}, {"B", "C", "y"}, {"C", "D", "x"}});
  GraphStatistics s = stats_of({{"x", 100}, {"y", 1}});
  DecompositionPlan plan = decompose(q, s, 1);
  REQUIRE(plan.leaves.size() == 3);
  CHECK(plan.leaves[0].qeids == std::vector<int>{1});  // the y edge
  CHECK(plan.leaves[1].qeids == std::vector<int>{0});  // adjacent x, smaller qeid
  CHECK(plan.leaves[2].qeids == std::vector<int>{2});
  CHECK(plan.leaves[0].score == doctest::Approx(1.0 / 101));
  CHECK(plan.leaves[1].score == doctest::Approx(100.0 / 101));
}

TEST_CASE("six-edge two-type pattern decomposes into three leaves") {
  QueryGraph q = make_query(
      "common_topic", 86400000, {"A1", "A2", "A3", "K", "L"},
      {{"A1", "K", "mentions"},
       {"A2", "K", "mentions"},
       {"A3", "K", "mentions"},
       {"A1", "L", "located_at"},
       {"A2", "L", "located_at"},
       {"A3", "L", "located_at"}},
      {{"A1", "Article"}, {"A2", "Article"}, {"A3", "Article"},
       {"K", "Keyword"}, {"L", "Location"}});
  GraphStatistics s = stats_of({{"mentions", 50}, {"located_at", 50}});
  DecompositionPlan plan = decompose(q, s, 2);
  CHECK(plan.leaves.size() == 3);
  SJTree tree = build_sj_tree(plan, q);
  CHECK(tree.node_count() == 5);
  check_plan_and_tree(q, plan, tree, 2);
}

TEST_CASE("two-leaf tree wires the shared vertex as the cut") {
  QueryGraph q = make_query("p", 10, {"A", "B", "C"},
                            {{"A", "B", "x"}, {"B", "C", "y"}});
  DecompositionPlan plan = decompose(q, stats_of({{"x", 8}, {"y", 2}}), 1);
  SJTree tree = build_sj_tree(plan, q);
  REQUIRE(tree.node_count() == 3);
  const SJTreeNode& root = tree.node(tree.root_id());
  CHECK(root.cut_vertices == std::vector<std::string>{"B"});
  CHECK(root.query_edges == std::vector<int>{0, 1});
  CHECK(tree.leaf_ids().size() == 2);
  // leaf order follows the plan: the rarer y edge first
  CHECK(tree.node(tree.leaf_ids()[0]).query_edges == std::vector<int>{1});
}

TEST_CASE("three-leaf plan yields the left-deep five-node shape") {
  QueryGraph q = make_query(
      "p3", 10, {"A", "B", "C", "D"},
      {{"A", "B", "x"}, {"B", "C", "y"}, {"C", "D", "z"}});
  DecompositionPlan plan =
      decompose(q, stats_of({{"x", 4}, {"y", 4}, {"z", 4}}), 1);
  REQUIRE(plan.leaves.size() == 3);
  SJTree tree = build_sj_tree(plan, q);
  REQUIRE(tree.node_count() == 5);
  const SJTreeNode& first_join = tree.node(tree.node(tree.leaf_ids()[0]).parent);
  std::set<int> expect(plan.leaves[0].qeids.begin(), plan.leaves[0].qeids.end());
  expect.insert(plan.leaves[1].qeids.begin(), plan.leaves[1].qeids.end());
  CHECK(std::set<int>(first_join.query_edges.begin(),
                      first_join.query_edges.end()) == expect);
  check_plan_and_tree(q, plan, tree, 1);
}

TEST_CASE("ties break lexicographically by type tuple then qeid") {
  // equal frequencies: type "a" sorts before "b"
  QueryGraph q = make_query("t", 10, {"A", "B", "C"},
                            {{"A", "B", "b"}, {"B", "C", "a"}});
  DecompositionPlan plan = decompose(q, stats_of({{"a", 5}, {"b", 5}}), 1);
  CHECK(plan.leaves[0].qeids == std::vector<int>{1});

  // identical tuples: smaller qeid wins
  QueryGraph q2 = make_query("t2", 10, {"A", "B", "C"},
                             {{"A", "B", "a"}, {"B", "C", "a"}});
  DecompositionPlan plan2 = decompose(q2, stats_of({{"a", 5}}), 1);
  CHECK(plan2.leaves[0].qeids == std::vector<int>{0});
}

TEST_CASE("leaf one is never beaten on score") {
  for (const QueryGraph& q : corpus(500)) {
    for (const auto& s :
         {stats_of({{"x", 10}, {"y", 10}, {"z", 10}}),
          stats_of({{"x", 1000}, {"y", 3}, {"z", 40}}), GraphStatistics{}}) {
      DecompositionPlan plan = decompose(q, s, 2);
      for (const auto& leaf : plan.leaves)
        CHECK(plan.leaves[0].score <= leaf.score + 1e-12);
    }
  }
}

TEST_CASE("decompose is deterministic") {
  GraphStatistics s = stats_of({{"x", 7}, {"y", 2}, {"z", 9}});
  for (const QueryGraph& q : corpus(500)) {
    DecompositionPlan a = decompose(q, s, 2);
    DecompositionPlan b = decompose(q, s, 2);
    REQUIRE(a.leaves.size() == b.leaves.size());
    for (std::size_t i = 0; i < a.leaves.size(); ++i)
      CHECK(a.leaves[i].qeids == b.leaves[i].qeids);
  }
}

TEST_CASE("corpus trees satisfy the structural properties at all leaf sizes") {
  for (const QueryGraph& q : corpus(500)) {
    for (int mls : {1, 2, 3}) {
      CAPTURE(q.name);
      CAPTURE(mls);
      DecompositionPlan plan =
          decompose(q, stats_of({{"x", 9}, {"y", 1}, {"z", 5}}), mls);
      check_plan_and_tree(q, plan, build_sj_tree(plan, q), mls);
    }
  }
}

TEST_CASE("decompose rejects bad inputs") {
  QueryGraph q = make_query("p", 10, {"A", "B"}, {{"A", "B", "x"}});
  CHECK_THROWS_AS(decompose(q, {}, 0), ContractError);

  QueryGraph disconnected;
  disconnected.name = "d";
  disconnected.window_ms = 10;
  disconnected.vertices = {{"A", "t"}, {"B", "t"}, {"C", "t"}, {"D", "t"}};
  disconnected.edges = {{0, "A", "B", "x"}, {1, "C", "D", "x"}};
  CHECK_THROWS_AS(decompose(disconnected, {}, 2), ContractError);
}

TEST_CASE("render_plan names every leaf and its score") {
  QueryGraph q = make_query("p", 10, {"A", "B", "C"},
                            {{"A", "B", "x"}, {"B", "C", "y"}});
  DecompositionPlan plan = decompose(q, stats_of({{"x", 3}, {"y", 1}}), 1);
  SJTree tree = build_sj_tree(plan, q);
  const std::string text = render_plan(plan, tree, q);
  CHECK(text.find("query p") != std::string::npos);
  CHECK(text.find("leaves=2") != std::string::npos);
  CHECK(text.find("score=") != std::string::npos);
  CHECK(text.find("cut={B}") != std::string::npos);
}
