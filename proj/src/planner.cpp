#include "sgq/planner.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

using TypeTuple = std::tuple<std::string, std::string, std::string>;

std::vector<std::string> subset_vertices(const QueryGraph& q,
                                         const std::vector<int>& qeids) {
  std::set<std::string> verts;
  for (int qeid : qeids) {
    verts.insert(q.edges[qeid].source_qid);
    verts.insert(q.edges[qeid].target_qid);
  }
  return {verts.begin(), verts.end()};
}

bool subset_connected(const QueryGraph& q, const std::vector<int>& qeids) {
  if (qeids.empty()) return false;
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (int qeid : qeids) {
    const QueryEdge& e = q.edges[qeid];
    adj[e.source_qid].push_back(e.target_qid);
    adj[e.target_qid].push_back(e.source_qid);
  }
  std::unordered_set<std::string> reached{adj.begin()->first};
  std::vector<std::string> frontier{adj.begin()->first};
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& next : adj[cur])
      if (reached.insert(next).second) frontier.push_back(next);
  }
  return reached.size() == adj.size();
}

struct Candidate {
  std::vector<int> qeids;  // sorted
  double score = 1.0;
  std::vector<TypeTuple> type_key;  // sorted per-edge type tuples
};

Candidate make_candidate(const QueryGraph& q, const GraphStatistics& stats,
                         std::vector<int> qeids) {
  Candidate c;
  c.qeids = std::move(qeids);
  c.score = selectivity_score(stats, q, c.qeids);
  for (int qeid : c.qeids) {
    const QueryEdge& e = q.edges[qeid];
    c.type_key.emplace_back(e.edge_type, q.vertex_type_of(e.source_qid),
                            q.vertex_type_of(e.target_qid));
  }
  std::sort(c.type_key.begin(), c.type_key.end());
  return c;
}

bool better_candidate(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.type_key != b.type_key) return a.type_key < b.type_key;
  return a.qeids < b.qeids;
}

// All connected subsets of the remaining edges, size 1..max_leaf_size.
// Query graphs are small; plain combination enumeration is fine.
std::vector<std::vector<int>> connected_subsets(const QueryGraph& q,
                                                const std::vector<int>& pool,
                                                int max_leaf_size) {
  std::vector<std::vector<int>> result;
  const std::size_t n = pool.size();
  std::vector<int> combo;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!combo.empty() && subset_connected(q, combo)) result.push_back(combo);
    if (static_cast<int>(combo.size()) == max_leaf_size) return;
    for (std::size_t i = start; i < n; ++i) {
      combo.push_back(pool[i]);
      self(self, i + 1);
      combo.pop_back();
    }
  };
  recurse(recurse, 0);
  return result;
}

bool touches(const QueryGraph& q, const std::vector<int>& qeids,
             const std::unordered_set<std::string>& covered_vertices) {
  for (int qeid : qeids) {
    const QueryEdge& e = q.edges[qeid];
    if (covered_vertices.count(e.source_qid) ||
        covered_vertices.count(e.target_qid))
      return true;
  }
  return false;
}

}  // namespace

DecompositionPlan decompose(const QueryGraph& q, const GraphStatistics& stats,
                            int max_leaf_size) {
  if (max_leaf_size < 1)
    throw ContractError("decompose: max_leaf_size must be >= 1");
  if (q.edges.empty()) throw ContractError("decompose: query has no edges");

  DecompositionPlan plan;
  std::vector<int> remaining;
  for (const auto& e : q.edges) remaining.push_back(e.qeid);
  std::unordered_set<std::string> covered_vertices;

  while (!remaining.empty()) {
    const Candidate* best = nullptr;
    std::vector<Candidate> candidates;
    for (auto& subset : connected_subsets(q, remaining, max_leaf_size)) {
      if (!plan.leaves.empty() && !touches(q, subset, covered_vertices))
        continue;
      candidates.push_back(make_candidate(q, stats, std::move(subset)));
    }
    for (const auto& c : candidates)
      if (!best || better_candidate(c, *best)) best = &c;
    if (!best)
      throw ContractError(
          "decompose: no connected extension found (disconnected query?)");

    plan.leaves.push_back({best->qeids, best->score});
    for (int qeid : best->qeids) {
      covered_vertices.insert(q.edges[qeid].source_qid);
      covered_vertices.insert(q.edges[qeid].target_qid);
      std::erase(remaining, qeid);
    }
  }
  return plan;
}

SJTree build_sj_tree(const DecompositionPlan& plan, const QueryGraph& q) {
  if (plan.leaves.empty()) throw ContractError("build_sj_tree: empty plan");

  std::vector<SJTreeNode> nodes;
  auto add_leaf = [&](const PlanLeaf& leaf) {
    SJTreeNode n;
    n.id = static_cast<int>(nodes.size());
    n.query_edges = leaf.qeids;
    std::sort(n.query_edges.begin(), n.query_edges.end());
    n.subgraph_vertices = subset_vertices(q, n.query_edges);
    nodes.push_back(std::move(n));
    return nodes.back().id;
  };

  int accum = add_leaf(plan.leaves.front());
  for (std::size_t i = 1; i < plan.leaves.size(); ++i) {
    const int right = add_leaf(plan.leaves[i]);
    SJTreeNode join;
    join.id = static_cast<int>(nodes.size());
    join.left = accum;
    join.right = right;
    std::set_union(nodes[accum].query_edges.begin(),
                   nodes[accum].query_edges.end(),
                   nodes[right].query_edges.begin(),
                   nodes[right].query_edges.end(),
                   std::back_inserter(join.query_edges));
    join.subgraph_vertices = subset_vertices(q, join.query_edges);
    std::set_intersection(nodes[accum].subgraph_vertices.begin(),
                          nodes[accum].subgraph_vertices.end(),
                          nodes[right].subgraph_vertices.begin(),
                          nodes[right].subgraph_vertices.end(),
                          std::back_inserter(join.cut_vertices));
    if (join.cut_vertices.empty())
      throw ContractError("build_sj_tree: empty cut at node " +
                          std::to_string(join.id));
    nodes.push_back(std::move(join));
    const int join_id = nodes.back().id;
    nodes[accum].parent = join_id;
    nodes[right].parent = join_id;
    accum = join_id;
  }

  // Root must cover the whole query.
  std::vector<int> all;
  for (const auto& e : q.edges) all.push_back(e.qeid);
  std::sort(all.begin(), all.end());
  if (nodes[accum].query_edges != all)
    throw ContractError("build_sj_tree: root does not cover the query");

  return SJTree(std::move(nodes));
}

namespace {

std::string edge_text(const QueryGraph& q, int qeid) {
  const QueryEdge& e = q.edges[qeid];
  std::ostringstream out;
  out << "e" << qeid << ":" << e.source_qid << "-[" << e.edge_type << "]->"
      << e.target_qid;
  return out.str();
}

void render_node(const SJTree& tree, const QueryGraph& q,
                 const std::unordered_map<int, double>& leaf_scores, int id,
                 int depth, std::ostringstream& out) {
  const SJTreeNode& n = tree.node(id);
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
  out << "node " << n.id << " "
      << (n.is_root() ? (n.is_leaf() ? "root+leaf" : "root")
                      : (n.is_leaf() ? "leaf" : "join"));
  out << " edges={";
  for (std::size_t i = 0; i < n.query_edges.size(); ++i)
    out << (i ? ", " : "") << edge_text(q, n.query_edges[i]);
  out << "}";
  if (!n.cut_vertices.empty()) {
    out << " cut={";
    for (std::size_t i = 0; i < n.cut_vertices.size(); ++i)
      out << (i ? ", " : "") << n.cut_vertices[i];
    out << "}";
  }
  if (auto it = leaf_scores.find(n.id); it != leaf_scores.end())
    out << " score=" << it->second;
  out << "\n";
  if (!n.is_leaf()) {
    render_node(tree, q, leaf_scores, n.left, depth + 1, out);
    render_node(tree, q, leaf_scores, n.right, depth + 1, out);
  }
}

}  // namespace

std::string render_plan(const DecompositionPlan& plan, const SJTree& tree,
                        const QueryGraph& q) {
  std::unordered_map<int, double> leaf_scores;
  for (std::size_t i = 0; i < plan.leaves.size(); ++i)
    leaf_scores[tree.leaf_ids()[i]] = plan.leaves[i].score;
  std::ostringstream out;
  out << "query " << q.name << " window_ms=" << q.window_ms << " leaves="
      << plan.leaves.size() << "\n";
  render_node(tree, q, leaf_scores, tree.root_id(), 0, out);
  return out.str();
}

}  // namespace sgq
